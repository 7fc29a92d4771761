#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proseek/adapters.hpp"
#include "proseek/frames.hpp"
#include "proseek/journal.hpp"

namespace proseek {

struct MemoryEntry {
    std::string id;  // L<n>, S<n>, P<n>
    Layer layer = Layer::Local;
    std::string text;
    std::vector<float> embedding;  // unit norm, cached at creation
    Seconds created_at = 0.0;
    std::vector<std::string> source_ids;
};

struct MemoryConfig {
    std::size_t flush_threshold = 2000;  // characters
    Seconds session_period = 300.0;
    std::size_t k_local = 10;
    std::size_t k_session = 5;
    std::size_t max_local_entries = 0;  // 0 keeps every entry
    std::size_t max_session_entries = 0;

    // Throws ConfigError naming the first non-positive field.
    void validate() const;
};

// Immutable view handed to readers.
struct MemorySnapshot {
    std::vector<MemoryEntry> local;    // oldest first
    std::vector<MemoryEntry> session;  // oldest first
    std::optional<MemoryEntry> profile;
    std::size_t buffer_chars = 0;
    Seconds last_session_time = 0.0;
};

struct ContextHits {
    std::vector<MemoryEntry> local;
    std::vector<MemoryEntry> session;
    std::optional<MemoryEntry> profile;
};

// Top `per_layer` entries of each stack by dot product with `query`, ties to
// the newer entry. Uses only the cached embeddings.
ContextHits retrieve_context(const MemorySnapshot& snapshot, std::span<const float> query, std::size_t per_layer = 2);

// Text embedded for a memory entry ("passage: " + text).
std::vector<float> embed_memory_text(const Embedder& embedder, const std::string& text);

// Three-layer reading memory: a character buffer flushed into local
// summaries, periodic session syntheses of the newest local summaries, and a
// single profile refreshed from the newest session summaries.
//
// Single writer. Text entering the buffer is sanitized first.
class HierarchicalMemory {
public:
    HierarchicalMemory(MemoryConfig config, std::shared_ptr<LlmAdapter> llm, std::shared_ptr<const Embedder> embedder,
                       Seconds session_start = 0.0);

    // Rebuilds the stacks from journal records; embeddings are recomputed.
    static HierarchicalMemory restore(MemoryConfig config, std::shared_ptr<LlmAdapter> llm,
                                      std::shared_ptr<const Embedder> embedder,
                                      const std::vector<JournalRecord>& records, Seconds session_start = 0.0);

    // Optional; records every committed entry. Not owned.
    void set_journal(JournalSink* journal) { journal_ = journal; }

    // Appends the sanitized delta lines and flushes the whole buffer into a
    // local summary once it reaches the flush threshold. On adapter failure
    // the buffer (including this delta) is kept and the error is rethrown.
    std::optional<MemoryEntry> append_delta(const LineDelta& delta);

    // Integrates the newest k_local local entries once a session period has
    // elapsed since the last synthesis. No-op when the local stack is empty.
    std::optional<MemoryEntry> synthesize_session(Seconds now);

    // Folds the current profile and the newest k_session session entries into
    // a new profile. Throws ContractViolation when the session stack is empty;
    // on adapter failure the previous profile is kept.
    MemoryEntry update_profile();

    // Installs an externally supplied profile.
    MemoryEntry seed_profile(const std::string& text, Seconds t);

    ContextHits retrieve_context(std::span<const float> query, std::size_t per_layer = 2) const;
    MemorySnapshot snapshot() const;

    const std::vector<MemoryEntry>& local_stack() const { return local_; }
    const std::vector<MemoryEntry>& session_stack() const { return session_; }
    const std::optional<MemoryEntry>& profile() const { return profile_; }
    const std::vector<std::string>& buffer() const { return buffer_; }
    std::size_t buffer_chars() const { return buffer_chars_; }
    Seconds last_session_time() const { return last_session_time_; }
    const MemoryConfig& config() const { return config_; }

    // Running totals for conservation checks.
    std::size_t chars_appended() const { return chars_appended_; }
    std::size_t chars_flushed() const { return chars_flushed_; }

private:
    MemoryEntry make_entry(Layer layer, std::string text, Seconds t, std::vector<std::string> sources);
    void commit(MemoryEntry entry);
    std::string complete(PromptKind kind, const std::vector<std::string>& inputs);

    MemoryConfig config_;
    std::shared_ptr<LlmAdapter> llm_;
    std::shared_ptr<const Embedder> embedder_;
    JournalSink* journal_ = nullptr;

    std::vector<MemoryEntry> local_;
    std::vector<MemoryEntry> session_;
    std::optional<MemoryEntry> profile_;

    std::vector<std::string> buffer_;  // sanitized lines
    std::vector<std::string> buffer_sources_;
    std::size_t buffer_chars_ = 0;
    Seconds last_session_time_ = 0.0;

    std::size_t next_delta_ = 1;
    std::size_t next_local_ = 1;
    std::size_t next_session_ = 1;
    std::size_t next_profile_ = 1;
    std::size_t chars_appended_ = 0;
    std::size_t chars_flushed_ = 0;
};

}  // namespace proseek
