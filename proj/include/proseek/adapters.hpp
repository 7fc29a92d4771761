#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace proseek {

enum class PromptKind { Summarize, Integrate, UpdateProfile, AskExplore, AskClarify };

std::string_view to_string(PromptKind kind);

// Text generation backend shared by memory synthesis and question generation.
//
// Deterministic implementations must be pure functions of (kind, inputs).
// For AskExplore/AskClarify the output is newline-separated question
// candidates. The question kinds receive inputs in the fixed order
// [profile (may be empty), session snippets..., local snippets..., on-screen].
// Failures are reported by throwing AdapterError.
class LlmAdapter {
public:
    virtual ~LlmAdapter() = default;
    virtual std::string complete(PromptKind kind, std::span<const std::string> inputs) = 0;
    // Adapters that cannot take concurrent calls return true; callers serialize them.
    virtual bool single_flight() const { return false; }
};

// Text encoder producing unit-norm vectors of a fixed dimension. Must be
// safe for concurrent calls.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    // Throws ContractViolation on empty text.
    virtual std::vector<float> embed(std::string_view text) const = 0;
};

// Extractive stub: Summarize keeps the first 200 chars, Integrate joins with
// " | " and keeps 400, UpdateProfile joins with " | " and keeps 800, question
// kinds echo the head of the on-screen text as one question.
class IdentityLlm final : public LlmAdapter {
public:
    static constexpr std::size_t kSummaryChars = 200;
    static constexpr std::size_t kIntegrateChars = 400;
    static constexpr std::size_t kProfileChars = 800;

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;
};

// Keyword-echo stub. Memory kinds behave like IdentityLlm. Question kinds emit
// `lines` questions built from the top profile keyword and the top on-screen
// keywords:
//   Explore: "What related work addresses <profile kw> in the context of <screen kw>?"
//   Clarify: "[clarify] What does <screen kw> mean with respect to <profile kw>?"
class TemplateLlm final : public LlmAdapter {
public:
    static constexpr std::string_view kClarifyMarker = "[clarify] ";

    explicit TemplateLlm(std::size_t lines = 3) : lines_(lines) {}

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;

private:
    std::size_t lines_;
};

// Highest-frequency non-stopword tokens (lowercase ASCII letter runs of
// length >= 3), ties broken by first occurrence.
std::vector<std::string> top_keywords(std::string_view text, std::size_t n);

// Character 3-gram hashing embedder: lowercased text, each 3-gram hashed into
// `dimension` buckets with multiplicative hashing, counts L2-normalized.
// Texts shorter than three characters hash as a single gram.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(std::size_t dimension = 384);

    std::size_t dimension() const override { return dimension_; }
    std::vector<float> embed(std::string_view text) const override;

    std::size_t bucket(std::u32string_view gram) const;

private:
    std::size_t dimension_;
};

struct AdapterCallRecord {
    PromptKind kind;
    std::vector<std::string> inputs;
    std::string output;
    double elapsed = 0.0;  // seconds
    bool failed = false;
};

// Records every call in order. Failed calls are recorded with failed = true.
class AuditingLlm final : public LlmAdapter {
public:
    explicit AuditingLlm(std::shared_ptr<LlmAdapter> inner) : inner_(std::move(inner)) {}

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;
    bool single_flight() const override { return inner_->single_flight(); }

    std::vector<AdapterCallRecord> records() const;
    std::size_t call_count() const;
    void clear();

private:
    std::shared_ptr<LlmAdapter> inner_;
    mutable std::mutex mu_;
    std::vector<AdapterCallRecord> records_;
};

// Fails a call with AdapterError when the inner adapter takes longer than
// `timeout`. The abandoned call keeps running on its own thread.
class TimeoutLlm final : public LlmAdapter {
public:
    TimeoutLlm(std::shared_ptr<LlmAdapter> inner, std::chrono::milliseconds timeout)
        : inner_(std::move(inner)), timeout_(timeout) {}

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;
    bool single_flight() const override { return inner_->single_flight(); }

private:
    std::shared_ptr<LlmAdapter> inner_;
    std::chrono::milliseconds timeout_;
};

// Serializes calls to a single-flight adapter.
class SerializedLlm final : public LlmAdapter {
public:
    explicit SerializedLlm(std::shared_ptr<LlmAdapter> inner) : inner_(std::move(inner)) {}

    std::string complete(PromptKind kind, std::span<const std::string> inputs) override;

private:
    std::shared_ptr<LlmAdapter> inner_;
    std::mutex mu_;
};

}  // namespace proseek
