#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proseek/adapters.hpp"
#include "proseek/frames.hpp"
#include "proseek/memory.hpp"
#include "proseek/triggers.hpp"

namespace proseek {

enum class QuestionIntent { Explore, Clarify };

std::string_view to_string(QuestionIntent intent);

// SustainedAttention -> Explore, ContentRevisit -> Clarify.
QuestionIntent intent_for(TriggerKind kind);
// Explore -> AskExplore, Clarify -> AskClarify.
PromptKind prompt_kind_for(QuestionIntent intent);

struct PromptContext {
    QuestionIntent intent = QuestionIntent::Explore;
    std::string on_screen;
    std::vector<std::string> local_snippets;    // best match first
    std::vector<std::string> session_snippets;  // best match first
    std::optional<std::string> profile_text;
};

struct GeneratedQuestion {
    std::string text;
    QuestionIntent intent = QuestionIntent::Explore;
    std::size_t rank = 0;  // 1-based within the batch

    bool operator==(const GeneratedQuestion&) const = default;
};

struct QgenConfig {
    std::size_t per_layer = 2;
    std::size_t on_screen_cap = 1500;  // characters kept from the head of the screen
};

// Embeds the sanitized screen text, pulls the best per_layer summaries from
// each stack and sanitizes everything that will reach the prompt.
PromptContext assemble_context(const TextFrame& frame, const MemorySnapshot& memory, const TriggerEvent& event,
                               const Embedder& embedder, const QgenConfig& config = {});

// Adapter inputs in the fixed order: profile ("" when absent), session
// snippets, local snippets, on-screen text.
std::vector<std::string> prompt_inputs(const PromptContext& ctx);

// Splits adapter output into at most n questions: trims, drops blank lines
// and leading list markers ("-", "*", "1.", "2)").
std::vector<std::string> parse_questions(std::string_view output, std::size_t n);

struct QuestionBatch {
    std::vector<GeneratedQuestion> questions;
    std::optional<std::string> warning;  // set when the batch is empty
};

// Never throws for adapter failures; they come back as a warning.
QuestionBatch generate_questions(const PromptContext& ctx, LlmAdapter& llm, std::size_t n = 3);

}  // namespace proseek
