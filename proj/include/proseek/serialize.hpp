#pragma once

#include <json.hpp>

#include "proseek/engine.hpp"

// JSON shapes shared by the replay report and the HTTP API.
namespace proseek::json {

using nlohmann::ordered_json;

ordered_json to_json(const TriggerEvent& event);
ordered_json to_json(const SearchResult& result);
// Card without timings; timings are reported separately so reports stay
// comparable across runs.
ordered_json to_json(const SuggestionCard& card);
ordered_json to_json(const StageTimings& timings);
ordered_json to_json(const MemoryEntry& entry);
ordered_json to_json(const MemorySnapshot& snapshot);
ordered_json to_json(const JournalRecord& record);

}  // namespace proseek::json
