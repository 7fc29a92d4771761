#include "proseek/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "proseek/error.hpp"

namespace proseek {

namespace {

using Json = nlohmann::json;
using Setter = std::function<void(EngineConfig&, const std::string&, const Json&)>;

Setter size_field(std::size_t EngineConfig::*field) {
    return [field](EngineConfig& c, const std::string& key, const Json& v) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(key, "expected a non-negative integer");
        c.*field = v.get<std::size_t>();
    };
}

Setter double_field(double EngineConfig::*field) {
    return [field](EngineConfig& c, const std::string& key, const Json& v) {
        if (!v.is_number()) throw ConfigError(key, "expected a number");
        c.*field = v.get<double>();
    };
}

Setter string_field(std::string EngineConfig::*field) {
    return [field](EngineConfig& c, const std::string& key, const Json& v) {
        if (!v.is_string()) throw ConfigError(key, "expected a string");
        c.*field = v.get<std::string>();
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"flush_threshold", size_field(&EngineConfig::flush_threshold)},
        {"session_period", double_field(&EngineConfig::session_period)},
        {"k_local", size_field(&EngineConfig::k_local)},
        {"k_session", size_field(&EngineConfig::k_session)},
        {"max_local_entries", size_field(&EngineConfig::max_local_entries)},
        {"max_session_entries", size_field(&EngineConfig::max_session_entries)},
        {"sustained_sim", double_field(&EngineConfig::sustained_sim)},
        {"revisit_sim", double_field(&EngineConfig::revisit_sim)},
        {"history_horizon", double_field(&EngineConfig::history_horizon)},
        {"threshold_min", double_field(&EngineConfig::threshold_min)},
        {"threshold_max", double_field(&EngineConfig::threshold_max)},
        {"refractory", double_field(&EngineConfig::refractory)},
        {"min_age", double_field(&EngineConfig::min_age)},
        {"default_speed", double_field(&EngineConfig::default_speed)},
        {"min_speed", double_field(&EngineConfig::min_speed)},
        {"max_speed", double_field(&EngineConfig::max_speed)},
        {"speed_window", size_field(&EngineConfig::speed_window)},
        {"questions_per_trigger", size_field(&EngineConfig::questions_per_trigger)},
        {"results_per_question", size_field(&EngineConfig::results_per_question)},
        {"context_per_layer", size_field(&EngineConfig::context_per_layer)},
        {"on_screen_cap", size_field(&EngineConfig::on_screen_cap)},
        {"search_enabled",
         [](EngineConfig& c, const std::string& key, const Json& v) {
             if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
             c.search_enabled = v.get<bool>();
         }},
        {"embed_dimension", size_field(&EngineConfig::embed_dimension)},
        {"embedder", string_field(&EngineConfig::embedder)},
        {"llm_adapter", string_field(&EngineConfig::llm_adapter)},
        {"adapter_timeout", double_field(&EngineConfig::adapter_timeout)},
        {"llm_endpoint", string_field(&EngineConfig::llm_endpoint)},
        {"llm_model", string_field(&EngineConfig::llm_model)},
        {"llm_key_env", string_field(&EngineConfig::llm_key_env)},
        {"prompt_summarize", string_field(&EngineConfig::prompt_summarize)},
        {"prompt_integrate", string_field(&EngineConfig::prompt_integrate)},
        {"prompt_update_profile", string_field(&EngineConfig::prompt_update_profile)},
        {"prompt_explore", string_field(&EngineConfig::prompt_explore)},
        {"prompt_clarify", string_field(&EngineConfig::prompt_clarify)},
        {"index_path", string_field(&EngineConfig::index_path)},
        {"journal_path", string_field(&EngineConfig::journal_path)},
        {"feedback_path", string_field(&EngineConfig::feedback_path)},
        {"profile_seed", string_field(&EngineConfig::profile_seed)},
        {"host", string_field(&EngineConfig::host)},
        {"port",
         [](EngineConfig& c, const std::string& key, const Json& v) {
             if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
             c.port = v.get<int>();
         }},
    };
    return table;
}

void require(bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

void EngineConfig::validate() const {
    require(flush_threshold > 0, "flush_threshold", "must be positive");
    require(session_period > 0.0, "session_period", "must be positive");
    require(k_local > 0, "k_local", "must be positive");
    require(k_session > 0, "k_session", "must be positive");
    require(sustained_sim > 0.0 && sustained_sim < 1.0, "sustained_sim", "must lie in (0, 1)");
    require(revisit_sim > 0.0 && revisit_sim < 1.0, "revisit_sim", "must lie in (0, 1)");
    require(history_horizon > 0.0, "history_horizon", "must be positive");
    require(threshold_min > 0.0, "threshold_min", "must be positive");
    require(threshold_max >= threshold_min, "threshold_max", "must be >= threshold_min");
    require(refractory >= 0.0, "refractory", "must be non-negative");
    require(min_age >= 0.0, "min_age", "must be non-negative");
    require(min_age < history_horizon, "min_age", "must be below history_horizon");
    require(min_speed > 0.0, "min_speed", "must be positive");
    require(max_speed >= min_speed, "max_speed", "must be >= min_speed");
    require(default_speed >= min_speed && default_speed <= max_speed, "default_speed",
            "must lie within [min_speed, max_speed]");
    require(speed_window >= 3, "speed_window", "must be at least 3");
    require(questions_per_trigger > 0, "questions_per_trigger", "must be positive");
    require(results_per_question > 0, "results_per_question", "must be positive");
    require(context_per_layer > 0, "context_per_layer", "must be positive");
    require(on_screen_cap > 0, "on_screen_cap", "must be positive");
    require(embed_dimension > 0, "embed_dimension", "must be positive");
    require(embedder == "hash", "embedder", "must be \"hash\"");
    require(llm_adapter == "identity" || llm_adapter == "template" || llm_adapter == "http", "llm_adapter",
            "must be one of identity, template, http");
    require(adapter_timeout > 0.0, "adapter_timeout", "must be positive");
    require(llm_adapter != "http" || !llm_endpoint.empty(), "llm_endpoint", "required for the http adapter");
    require(port >= 0 && port <= 65535, "port", "must lie in [0, 65535]");
}

MemoryConfig EngineConfig::memory() const {
    return {flush_threshold, session_period, k_local, k_session, max_local_entries, max_session_entries};
}

TriggerConfig EngineConfig::triggers() const {
    return {sustained_sim, revisit_sim, history_horizon, min_age, refractory, {threshold_min, threshold_max}};
}

SpeedConfig EngineConfig::speed() const { return {default_speed, min_speed, max_speed, speed_window}; }

QgenConfig EngineConfig::qgen() const { return {context_per_layer, on_screen_cap}; }

EngineConfig parse_config(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("<config>", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<config>", "expected a JSON object");
    EngineConfig config;
    for (const auto& [key, value] : j.items()) {
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, "unknown configuration key");
        it->second(config, key, value);
    }
    config.validate();
    return config;
}

EngineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<config>", "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace proseek
