#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "proseek/error.hpp"
#include "scenarios.hpp"

using namespace proseek;

namespace {

struct ReplayFixture : ::testing::Test {
    void SetUp() override {
        index = scenarios::build_toy_index(dir.path());
        config = scenarios::template_config(index, scenarios::kLatencyProfile);
    }
    testsupport::TempDir dir;
    std::filesystem::path index;
    EngineConfig config;
};

nlohmann::json without_timings(const std::string& report) {
    auto j = nlohmann::json::parse(report);
    j.erase("timings");
    return j;
}

}  // namespace

TEST(Trace, ParseAndErrors) {
    std::istringstream ok("{\"t\": 0, \"text\": \"a\"}\n\n{\"t\": 1.5, \"text\": \"b\"}\n");
    auto trace = parse_trace(ok);
    ASSERT_EQ(trace.size(), 2u);
    EXPECT_DOUBLE_EQ(trace[1].t, 1.5);
    EXPECT_EQ(trace[1].text, "b");

    auto line_of = [](const std::string& s) -> std::size_t {
        std::istringstream in(s);
        try {
            parse_trace(in);
        } catch (const FormatError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("{\"t\": 0, \"text\": \"a\"}\n{\"t\": 0, \"text\": \"b\"}\n"), 2u);
    EXPECT_EQ(line_of("{\"t\": 0, \"text\": \"a\"}\n{oops\n"), 2u);
    EXPECT_EQ(line_of("{\"t\": \"0\", \"text\": \"a\"}\n"), 1u);
    EXPECT_EQ(line_of("{\"t\": 0}\n"), 1u);
    EXPECT_EQ(line_of("{\"t\": 0, \"text\": 5}\n"), 1u);
}

TEST(Trace, LineRoundTrip) {
    TraceRecord r{2.5, "x \"y\"\n\xE6\x97\xA5"};
    std::istringstream in(to_trace_line(r) + "\n");
    auto back = parse_trace(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].t, r.t);
    EXPECT_EQ(back[0].text, r.text);
}

TEST_F(ReplayFixture, EmptyTraceGivesEmptyReport) {
    testsupport::write_file(dir / "empty.jsonl", "");
    config.profile_seed.clear();
    replay_file(dir / "empty.jsonl", config, dir / "report.json");
    auto j = nlohmann::json::parse(testsupport::read_file(dir / "report.json"));
    EXPECT_EQ(j["frames"], 0);
    EXPECT_TRUE(j["events"].empty());
    EXPECT_TRUE(j["cards"].empty());
    EXPECT_TRUE(j["warnings"].empty());
    EXPECT_TRUE(j["memory_journal"].empty());
    EXPECT_TRUE(j["timings"]["cards"].empty());
}

TEST_F(ReplayFixture, MalformedTraceAbortsWithLine) {
    testsupport::write_file(dir / "bad.jsonl", "{\"t\": 0, \"text\": \"a\"}\n{\"t\": 1, \"text\": \n");
    try {
        replay_file(dir / "bad.jsonl", config, dir / "report.json");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST_F(ReplayFixture, ReportsAreDeterministicModuloTimings) {
    testsupport::write_file(dir / "trace.jsonl", scenarios::trace_jsonl(scenarios::steady_then_pause(400, true)));
    replay_file(dir / "trace.jsonl", config, dir / "r1.json");
    replay_file(dir / "trace.jsonl", config, dir / "r2.json");
    const std::string r1 = testsupport::read_file(dir / "r1.json");
    const std::string r2 = testsupport::read_file(dir / "r2.json");
    EXPECT_EQ(without_timings(r1).dump(), without_timings(r2).dump());

    auto j = nlohmann::json::parse(r1);
    EXPECT_EQ(j["frames"], 401);
    ASSERT_EQ(j["events"].size(), 1u);
    EXPECT_EQ(j["events"][0]["kind"], "sustained_attention");
    EXPECT_EQ(j["events"][0]["fired_at"], 91.0);
    ASSERT_EQ(j["cards"].size(), 1u);
    EXPECT_EQ(j["cards"][0]["questions"].size(), 3u);
    EXPECT_FALSE(j["cards"][0].contains("timings"));

    // journal: seed profile, three local summaries, one session and one profile update at t = 300
    const auto& journal = j["memory_journal"];
    ASSERT_EQ(journal.size(), 6u);
    EXPECT_EQ(journal[0]["layer"], "profile");
    EXPECT_EQ(journal[4]["layer"], "session");
    EXPECT_EQ(journal[4]["t"], 300.0);
    EXPECT_EQ(journal[5]["layer"], "profile");
    EXPECT_EQ(read_journal(dir / "r1.json.journal.jsonl").size(), 6u);

    // totals equal the sum over cards
    double total = 0, qgen = 0;
    for (const auto& c : j["timings"]["cards"]) {
        total += c["total"].get<double>();
        qgen += c["question_gen"].get<double>();
        EXPECT_GE(c["total"].get<double>(), c["search"].get<double>());
    }
    EXPECT_DOUBLE_EQ(j["timings"]["sum"]["total"].get<double>(), total);
    EXPECT_DOUBLE_EQ(j["timings"]["sum"]["question_gen"].get<double>(), qgen);
}

TEST_F(ReplayFixture, JournalPathFromConfigIsTruncated) {
    config.journal_path = (dir / "mem.jsonl").string();
    testsupport::write_file(dir / "mem.jsonl", "stale\n");
    testsupport::write_file(dir / "trace.jsonl", scenarios::trace_jsonl(scenarios::steady_then_pause(40)));
    replay_file(dir / "trace.jsonl", config, dir / "r.json");
    auto recs = read_journal(dir / "mem.jsonl");
    ASSERT_EQ(recs.size(), 3u);  // seed + two pages
    EXPECT_EQ(recs[0].layer, Layer::Profile);
}
