#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "proseek/error.hpp"
#include "proseek/mrr.hpp"

using namespace proseek;

namespace {

// Places the single relevant doc at `rank` (0 = absent) among 20 candidates.
std::vector<std::string> ranked_with_hit(std::size_t rank) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= 20; ++i) out.push_back(i == rank ? "rel" : "n" + std::to_string(i));
    return out;
}

}  // namespace

TEST(Mrr, Examples) {
    EXPECT_EQ(mrr_at_k({{"q", {"rel"}}}, {{"q", {"rel"}}}, 10), 1.0);
    proseek::Run run = {{"a", ranked_with_hit(1)}, {"b", ranked_with_hit(4)}, {"c", ranked_with_hit(12)}};
    proseek::Qrels qrels = {{"a", {"rel"}}, {"b", {"rel"}}, {"c", {"rel"}}};
    EXPECT_NEAR(mrr_at_k(run, qrels, 10), (1.0 + 0.25 + 0.0) / 3.0, 1e-12);
    EXPECT_EQ(mrr_at_k({{"q", ranked_with_hit(0)}}, {{"q", {"rel"}}}, 10), 0.0);
}

TEST(Mrr, CutoffIsInclusive) {
    EXPECT_DOUBLE_EQ(mrr_at_k({{"q", ranked_with_hit(10)}}, {{"q", {"rel"}}}, 10), 0.1);
    EXPECT_DOUBLE_EQ(mrr_at_k({{"q", ranked_with_hit(11)}}, {{"q", {"rel"}}}, 10), 0.0);
}

TEST(Mrr, MissingQueryNamed) {
    try {
        mrr_at_k({{"lost", {"x"}}}, {{"q", {"x"}}}, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("lost"), std::string::npos);
    }
}

TEST(Mrr, EmptyRun) { EXPECT_EQ(mrr_at_k({}, {}, 10), 0.0); }

TEST(MrrProperty, BoundedAndOrderInvariant) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> rank(0, 20);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<std::string, std::vector<std::string>>> rows;
        proseek::Qrels qrels;
        double oracle = 0.0;
        const int n = 1 + trial % 15;
        for (int q = 0; q < n; ++q) {
            const std::size_t r = rank(rng);
            const std::string id = "q" + std::to_string(q);
            rows.emplace_back(id, ranked_with_hit(r));
            qrels[id] = {"rel"};
            if (r >= 1 && r <= 10) oracle += 1.0 / static_cast<double>(r);
        }
        oracle /= n;
        std::stringstream forward, backward;
        for (const auto& [q, docs] : rows)
            for (std::size_t i = 0; i < docs.size(); ++i) forward << q << " " << docs[i] << " " << i + 1 << " 0.5\n";
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            for (std::size_t i = it->second.size(); i-- > 0;)
                backward << it->first << " " << it->second[i] << " " << i + 1 << " 0.5\n";
        const double a = mrr_at_k(parse_run(forward), qrels, 10);
        const double b = mrr_at_k(parse_run(backward), qrels, 10);
        EXPECT_NEAR(a, oracle, 1e-12);
        EXPECT_EQ(a, b);
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
    }
}

TEST(Mrr, ParseFormats) {
    std::istringstream run_in("q1 d2 2 0.5\nq1 d1 1 0.9\n\nq2 d3 1 0.1\n");
    auto run = parse_run(run_in);
    EXPECT_EQ(run["q1"], (std::vector<std::string>{"d1", "d2"}));
    std::istringstream qrels_in("q1 d2\nq2 0 d3 1\nq2 0 d4 0\n");
    auto qrels = parse_qrels(qrels_in);
    EXPECT_EQ(qrels["q1"], (std::set<std::string>{"d2"}));
    EXPECT_EQ(qrels["q2"], (std::set<std::string>{"d3"}));
    EXPECT_DOUBLE_EQ(mrr_at_k(run, qrels, 10), (0.5 + 1.0) / 2.0);

    std::istringstream bad("q1 d1 x 0.5\n");
    try {
        parse_run(bad);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    std::istringstream short_line("q1 d1\n");
    EXPECT_THROW(parse_run(short_line), FormatError);
}
