#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "proseek/engine.hpp"

namespace proseek {

// One trace line: {"t": seconds, "text": string}.
struct TraceRecord {
    Seconds t = 0.0;
    std::string text;
};

// Throws FormatError with the 1-based line number for malformed or
// non-ascending records. Blank lines are skipped.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

std::string to_trace_line(const TraceRecord& record);

struct ReplayReport {
    std::size_t frames = 0;
    std::vector<TriggerEvent> events;
    std::vector<SuggestionCard> cards;
    std::vector<std::string> warnings;
    std::vector<JournalRecord> journal;
};

// Feeds every record through `engine` in logical time.
ReplayReport replay_trace(Engine& engine, const std::vector<TraceRecord>& trace, const VectorJournal& journal);

// Deterministic JSON report; every wall-clock figure sits under "timings".
std::string report_json(const ReplayReport& report);

// Full CLI flow: builds components from config, replays, writes the report to
// `out` and the memory journal to config.journal_path (or `<out>.journal.jsonl`).
void replay_file(const std::filesystem::path& trace, const EngineConfig& config, const std::filesystem::path& out);

}  // namespace proseek
