#include "proseek/http_llm.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "proseek/error.hpp"

namespace proseek {

std::string default_instruction(PromptKind kind) {
    switch (kind) {
        case PromptKind::Summarize:
            return "Summarize the following text read on screen in a few sentences. Do not include names, "
                   "URLs, email addresses or numbers.";
        case PromptKind::Integrate:
            return "Integrate the following reading summaries into one coherent summary of the document "
                   "being read and the knowledge accumulated so far.";
        case PromptKind::UpdateProfile:
            return "Update the reader's research-interest profile. The first item is the current profile "
                   "(if any); the remaining items are recent session summaries. Answer with the updated "
                   "profile as one paragraph.";
        case PromptKind::AskExplore:
            return "The reader paused on the current text. Using their profile, session and local context, "
                   "write literature search questions that broaden the scope: related work, alternative "
                   "methodologies, or critical limitations. One question per line, no numbering.";
        case PromptKind::AskClarify:
            return "The reader scrolled back to earlier text. Using their profile, session and local context, "
                   "write literature search questions that clarify: definitions of specific terms or "
                   "summaries of previously introduced concepts. One question per line, no numbering.";
    }
    return {};
}

HttpLlm::HttpLlm(HttpLlmOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw ConfigError("llm_endpoint", "required for the http adapter");
}

std::string HttpLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    if (inputs.empty()) throw ContractViolation("llm_complete: inputs must be nonempty");

    auto it = options_.instructions.find(kind);
    const std::string instruction = it != options_.instructions.end() ? it->second : default_instruction(kind);
    std::string user;
    for (const auto& in : inputs) {
        if (!user.empty()) user += "\n\n";
        user += in;
    }
    nlohmann::json body = {
        {"model", options_.model},
        {"temperature", 0},
        {"messages", nlohmann::json::array({{{"role", "system"}, {"content", instruction}},
                                            {{"role", "user"}, {"content", user}}})}};

    httplib::Client client(options_.endpoint);
    const auto secs = options_.timeout.count() / 1000;
    const auto usecs = (options_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!options_.key_env.empty()) {
        if (const char* key = std::getenv(options_.key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw AdapterError("llm request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw AdapterError("llm backend returned HTTP " + std::to_string(res->status));
    try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw AdapterError(std::string("unexpected llm response: ") + e.what());
    }
}

}  // namespace proseek
