#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "proseek/memory.hpp"
#include "proseek/qgen.hpp"
#include "proseek/textdyn.hpp"
#include "proseek/triggers.hpp"

namespace proseek {

// Every tunable of the engine. Loaded from a flat JSON object whose keys are
// the field names below; absent keys keep their defaults, unknown keys are
// rejected.
struct EngineConfig {
    // memory
    std::size_t flush_threshold = 2000;
    double session_period = 300.0;
    std::size_t k_local = 10;
    std::size_t k_session = 5;
    std::size_t max_local_entries = 0;
    std::size_t max_session_entries = 0;
    // triggers
    double sustained_sim = 0.9;
    double revisit_sim = 0.8;
    double history_horizon = 180.0;
    double threshold_min = 10.0;
    double threshold_max = 60.0;
    double refractory = 120.0;
    double min_age = 20.0;
    // reading speed
    double default_speed = 100.0;
    double min_speed = 10.0;
    double max_speed = 500.0;
    std::size_t speed_window = 20;
    // questions and search
    std::size_t questions_per_trigger = 3;
    std::size_t results_per_question = 3;
    std::size_t context_per_layer = 2;
    std::size_t on_screen_cap = 1500;
    bool search_enabled = true;
    // adapters
    std::size_t embed_dimension = 384;
    std::string embedder = "hash";
    std::string llm_adapter = "template";  // identity | template | http
    double adapter_timeout = 30.0;         // seconds
    std::string llm_endpoint;
    std::string llm_model;
    std::string llm_key_env;  // name of the environment variable holding the key
    std::string prompt_summarize;
    std::string prompt_integrate;
    std::string prompt_update_profile;
    std::string prompt_explore;
    std::string prompt_clarify;
    // paths and service
    std::string index_path;
    std::string journal_path;
    std::string feedback_path;
    std::string profile_seed;
    std::string host = "127.0.0.1";
    int port = 8765;

    // Throws ConfigError naming the offending key.
    void validate() const;

    MemoryConfig memory() const;
    TriggerConfig triggers() const;
    SpeedConfig speed() const;
    QgenConfig qgen() const;
};

// Throws ConfigError for unknown keys, wrong types or out-of-range values.
EngineConfig parse_config(const std::string& json_text);
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace proseek
