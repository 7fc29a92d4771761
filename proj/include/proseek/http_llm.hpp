#pragma once

#include <chrono>
#include <map>
#include <string>

#include "proseek/adapters.hpp"

namespace proseek {

struct HttpLlmOptions {
    std::string endpoint;  // e.g. "http://127.0.0.1:8080"
    std::string model;
    std::string key_env;   // environment variable holding the API key; empty for none
    std::chrono::milliseconds timeout{30000};
    std::map<PromptKind, std::string> instructions;  // overrides of default_instruction()
};

std::string default_instruction(PromptKind kind);

// Chat-completions client (POST {endpoint}/v1/chat/completions). The system
// message carries the instruction for the prompt kind, the user message the
// inputs separated by blank lines. The key is read from the environment at
// call time and never stored or logged.
class HttpLlm final : public LlmAdapter {
public:
    explicit HttpLlm(HttpLlmOptions options);

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;
    bool single_flight() const override { return true; }

private:
    HttpLlmOptions options_;
};

}  // namespace proseek
