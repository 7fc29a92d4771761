#include "proseek/qgen.hpp"

#include "proseek/error.hpp"
#include "proseek/retrieval.hpp"
#include "proseek/text.hpp"

namespace proseek {

std::string_view to_string(QuestionIntent intent) {
    return intent == QuestionIntent::Explore ? "explore" : "clarify";
}

QuestionIntent intent_for(TriggerKind kind) {
    return kind == TriggerKind::SustainedAttention ? QuestionIntent::Explore : QuestionIntent::Clarify;
}

PromptKind prompt_kind_for(QuestionIntent intent) {
    return intent == QuestionIntent::Explore ? PromptKind::AskExplore : PromptKind::AskClarify;
}

PromptContext assemble_context(const TextFrame& frame, const MemorySnapshot& memory, const TriggerEvent& event,
                               const Embedder& embedder, const QgenConfig& config) {
    PromptContext ctx;
    ctx.intent = intent_for(event.kind);
    const std::string screen = sanitize(frame.text);
    ctx.on_screen = text::head(screen, config.on_screen_cap);

    if (!screen.empty() && (!memory.local.empty() || !memory.session.empty())) {
        const auto query = embed_query(embedder, screen);
        const auto hits = retrieve_context(memory, query, config.per_layer);
        for (const auto& e : hits.local) ctx.local_snippets.push_back(sanitize(e.text));
        for (const auto& e : hits.session) ctx.session_snippets.push_back(sanitize(e.text));
    }
    if (memory.profile) ctx.profile_text = sanitize(memory.profile->text);
    return ctx;
}

std::vector<std::string> prompt_inputs(const PromptContext& ctx) {
    std::vector<std::string> inputs;
    inputs.push_back(ctx.profile_text.value_or(""));
    inputs.insert(inputs.end(), ctx.session_snippets.begin(), ctx.session_snippets.end());
    inputs.insert(inputs.end(), ctx.local_snippets.begin(), ctx.local_snippets.end());
    inputs.push_back(ctx.on_screen);
    return inputs;
}

namespace {

std::string strip_list_marker(std::string line) {
    if (line.starts_with("- ") || line.starts_with("* ")) return text::trim(line.substr(2));
    std::size_t i = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') && line[i + 1] == ' ') {
        return text::trim(line.substr(i + 2));
    }
    return line;
}

}  // namespace

std::vector<std::string> parse_questions(std::string_view output, std::size_t n) {
    std::vector<std::string> out;
    for (const auto& raw : text::split_lines(output)) {
        if (out.size() >= n) break;
        std::string line = strip_list_marker(text::trim(raw));
        if (!line.empty()) out.push_back(std::move(line));
    }
    return out;
}

QuestionBatch generate_questions(const PromptContext& ctx, LlmAdapter& llm, std::size_t n) {
    if (n == 0) throw ContractViolation("generate_questions: n must be at least 1");
    QuestionBatch batch;
    std::string output;
    try {
        output = llm.complete(prompt_kind_for(ctx.intent), prompt_inputs(ctx));
    } catch (const Error& e) {
        batch.warning = std::string("question generation failed: ") + e.what();
        return batch;
    }
    const auto lines = parse_questions(output, n);
    for (std::size_t i = 0; i < lines.size(); ++i) batch.questions.push_back({lines[i], ctx.intent, i + 1});
    if (batch.questions.empty()) batch.warning = "question generation produced no questions";
    return batch;
}

}  // namespace proseek
