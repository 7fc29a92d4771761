#include "proseek/replay.hpp"

#include <fstream>

#include "proseek/error.hpp"
#include "proseek/serialize.hpp"
#include "proseek/text.hpp"

namespace proseek {

namespace json {

ordered_json to_json(const TriggerEvent& e) {
    ordered_json j;
    j["kind"] = to_string(e.kind);
    j["fired_at"] = e.fired_at;
    j["anchor_at"] = e.anchor_at;
    j["similarity"] = e.similarity;
    j["threshold_used"] = e.threshold_used ? ordered_json(*e.threshold_used) : ordered_json(nullptr);
    return j;
}

ordered_json to_json(const SearchResult& r) {
    ordered_json j;
    j["rank"] = r.rank;
    j["doc_id"] = r.doc_id;
    j["score"] = r.score;
    j["title"] = r.metadata.title;
    j["authors"] = r.metadata.authors;
    j["year"] = r.metadata.year ? ordered_json(*r.metadata.year) : ordered_json(nullptr);
    j["url"] = r.metadata.url ? ordered_json(*r.metadata.url) : ordered_json(nullptr);
    return j;
}

ordered_json to_json(const SuggestionCard& c) {
    ordered_json j;
    j["card_id"] = c.card_id;
    j["trigger"] = to_json(c.trigger);
    j["intent"] = to_string(intent_for(c.trigger.kind));
    j["created_at"] = c.created_at;
    j["status"] = to_string(c.status);
    ordered_json qs = ordered_json::array();
    for (const auto& q : c.questions) {
        ordered_json qj;
        qj["rank"] = q.question.rank;
        qj["text"] = q.question.text;
        ordered_json rs = ordered_json::array();
        for (const auto& r : q.results) rs.push_back(to_json(r));
        qj["results"] = std::move(rs);
        qs.push_back(std::move(qj));
    }
    j["questions"] = std::move(qs);
    return j;
}

ordered_json to_json(const StageTimings& t) {
    ordered_json j;
    j["sensing_memory"] = t.sensing_memory;
    j["question_gen"] = t.question_gen;
    j["search"] = t.search;
    j["total"] = t.total;
    return j;
}

ordered_json to_json(const MemoryEntry& e) {
    ordered_json j;
    j["id"] = e.id;
    j["layer"] = to_string(e.layer);
    j["t"] = e.created_at;
    j["text"] = e.text;
    j["sources"] = e.source_ids;
    return j;
}

ordered_json to_json(const MemorySnapshot& s) {
    ordered_json j;
    j["profile"] = s.profile ? to_json(*s.profile) : ordered_json(nullptr);
    ordered_json session = ordered_json::array();
    for (auto it = s.session.rbegin(); it != s.session.rend(); ++it) session.push_back(to_json(*it));
    ordered_json local = ordered_json::array();
    for (auto it = s.local.rbegin(); it != s.local.rend(); ++it) local.push_back(to_json(*it));
    j["session"] = std::move(session);  // newest first
    j["local"] = std::move(local);      // newest first
    j["buffer_chars"] = s.buffer_chars;
    j["last_session_time"] = s.last_session_time;
    return j;
}

ordered_json to_json(const JournalRecord& r) { return ordered_json::parse(to_json_line(r)); }

}  // namespace json

std::vector<TraceRecord> parse_trace(std::istream& in) {
    std::vector<TraceRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        TraceRecord rec;
        try {
            auto j = nlohmann::json::parse(line);
            const auto& t = j.at("t");
            const auto& txt = j.at("text");
            if (!t.is_number()) throw FormatError("'t' is not a number", line_no);
            if (!txt.is_string()) throw FormatError("'text' is not a string", line_no);
            rec.t = t.get<double>();
            rec.text = txt.get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("malformed trace record: ") + e.what(), line_no);
        }
        if (!out.empty() && !(rec.t > out.back().t)) throw FormatError("timestamps must be ascending", line_no);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace " + path.string());
    return parse_trace(in);
}

std::string to_trace_line(const TraceRecord& record) {
    nlohmann::ordered_json j;
    j["t"] = record.t;
    j["text"] = record.text;
    return j.dump();
}

ReplayReport replay_trace(Engine& engine, const std::vector<TraceRecord>& trace, const VectorJournal& journal) {
    for (const auto& rec : trace) engine.ingest(rec.text, rec.t);
    engine.wait_idle();
    ReplayReport report;
    report.frames = trace.size();
    report.events = engine.events();
    report.cards = engine.cards();
    report.warnings = engine.warnings();
    report.journal = journal.records;
    return report;
}

std::string report_json(const ReplayReport& report) {
    using json::ordered_json;
    ordered_json j;
    j["frames"] = report.frames;
    ordered_json events = ordered_json::array();
    for (const auto& e : report.events) events.push_back(json::to_json(e));
    j["events"] = std::move(events);
    ordered_json cards = ordered_json::array();
    for (const auto& c : report.cards) cards.push_back(json::to_json(c));
    j["cards"] = std::move(cards);
    j["warnings"] = report.warnings;
    ordered_json journal = ordered_json::array();
    for (const auto& r : report.journal) journal.push_back(json::to_json(r));
    j["memory_journal"] = std::move(journal);

    StageTimings sum;
    ordered_json per_card = ordered_json::array();
    for (const auto& c : report.cards) {
        ordered_json t = json::to_json(c.timings);
        t["card_id"] = c.card_id;
        per_card.push_back(std::move(t));
        sum.sensing_memory += c.timings.sensing_memory;
        sum.question_gen += c.timings.question_gen;
        sum.search += c.timings.search;
        sum.total += c.timings.total;
    }
    ordered_json timings;
    timings["cards"] = std::move(per_card);
    timings["sum"] = json::to_json(sum);
    j["timings"] = std::move(timings);
    return j.dump(2) + "\n";
}

namespace {

class TeeJournal final : public JournalSink {
public:
    TeeJournal(JournalSink& a, JournalSink& b) : a_(a), b_(b) {}
    void append(const JournalRecord& rec) override {
        a_.append(rec);
        b_.append(rec);
    }

private:
    JournalSink& a_;
    JournalSink& b_;
};

}  // namespace

void replay_file(const std::filesystem::path& trace_path, const EngineConfig& config,
                 const std::filesystem::path& out) {
    const auto trace = read_trace(trace_path);
    auto components = make_components(config);

    const std::filesystem::path journal_path =
        config.journal_path.empty() ? std::filesystem::path(out.string() + ".journal.jsonl")
                                    : std::filesystem::path(config.journal_path);
    std::filesystem::remove(journal_path);
    FileJournal file(journal_path);
    VectorJournal captured;
    TeeJournal tee(file, captured);

    Engine::Options options;
    options.journal = &tee;
    Engine engine(config, std::move(components), std::move(options));
    const ReplayReport report = replay_trace(engine, trace, captured);

    std::ofstream os(out, std::ios::trunc);
    if (!os) throw Error("cannot write report " + out.string());
    os << report_json(report);
}

}  // namespace proseek
