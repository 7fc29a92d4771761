#include "proseek/memory.hpp"

#include <algorithm>
#include <numeric>

#include "proseek/error.hpp"
#include "proseek/kernels.hpp"
#include "proseek/text.hpp"

namespace proseek {

void MemoryConfig::validate() const {
    if (flush_threshold == 0) throw ConfigError("flush_threshold", "must be positive");
    if (!(session_period > 0.0)) throw ConfigError("session_period", "must be positive");
    if (k_local == 0) throw ConfigError("k_local", "must be positive");
    if (k_session == 0) throw ConfigError("k_session", "must be positive");
}

std::vector<float> embed_memory_text(const Embedder& embedder, const std::string& text) {
    return embedder.embed("passage: " + text);
}

namespace {

std::vector<MemoryEntry> top_entries(const std::vector<MemoryEntry>& stack, std::span<const float> query,
                                     std::size_t per_layer) {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(stack.size());
    for (std::size_t i = 0; i < stack.size(); ++i) {
        if (stack[i].embedding.size() != query.size()) {
            throw ContractViolation("memory query dimension does not match cached embeddings");
        }
        scored.emplace_back(kernels::dot(stack[i].embedding, query), i);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    });
    std::vector<MemoryEntry> out;
    for (std::size_t i = 0; i < scored.size() && i < per_layer; ++i) out.push_back(stack[scored[i].second]);
    return out;
}

template <typename T>
std::vector<T> newest(const std::vector<T>& v, std::size_t k) {
    const std::size_t n = std::min(k, v.size());
    return std::vector<T>(v.end() - static_cast<std::ptrdiff_t>(n), v.end());
}

}  // namespace

ContextHits retrieve_context(const MemorySnapshot& snapshot, std::span<const float> query, std::size_t per_layer) {
    return {top_entries(snapshot.local, query, per_layer), top_entries(snapshot.session, query, per_layer),
            snapshot.profile};
}

HierarchicalMemory::HierarchicalMemory(MemoryConfig config, std::shared_ptr<LlmAdapter> llm,
                                       std::shared_ptr<const Embedder> embedder, Seconds session_start)
    : config_(config), llm_(std::move(llm)), embedder_(std::move(embedder)), last_session_time_(session_start) {
    config_.validate();
    if (!llm_ || !embedder_) throw ContractViolation("memory requires an llm adapter and an embedder");
}

HierarchicalMemory HierarchicalMemory::restore(MemoryConfig config, std::shared_ptr<LlmAdapter> llm,
                                               std::shared_ptr<const Embedder> embedder,
                                               const std::vector<JournalRecord>& records, Seconds session_start) {
    HierarchicalMemory mem(config, std::move(llm), std::move(embedder), session_start);
    for (const auto& rec : records) {
        MemoryEntry entry = mem.make_entry(rec.layer, rec.text, rec.t, rec.sources);
        if (rec.layer == Layer::Session) mem.last_session_time_ = rec.t;
        if (rec.layer == Layer::Local) {
            // keep delta ids unique across the restart
            for (const auto& src : rec.sources) {
                if (src.size() > 1 && src[0] == 'D') {
                    mem.next_delta_ = std::max(mem.next_delta_, std::stoul(src.substr(1)) + 1);
                }
            }
        }
        mem.commit(std::move(entry));
    }
    return mem;
}

MemoryEntry HierarchicalMemory::make_entry(Layer layer, std::string text, Seconds t, std::vector<std::string> sources) {
    if (text.empty()) throw AdapterError(std::string(to_string(layer)) + " summary is empty");
    MemoryEntry e;
    e.layer = layer;
    switch (layer) {
        case Layer::Local: e.id = "L" + std::to_string(next_local_++); break;
        case Layer::Session: e.id = "S" + std::to_string(next_session_++); break;
        case Layer::Profile: e.id = "P" + std::to_string(next_profile_++); break;
    }
    e.embedding = embed_memory_text(*embedder_, text);
    e.text = std::move(text);
    e.created_at = t;
    e.source_ids = std::move(sources);
    return e;
}

void HierarchicalMemory::commit(MemoryEntry entry) {
    switch (entry.layer) {
        case Layer::Local:
            local_.push_back(std::move(entry));
            if (config_.max_local_entries && local_.size() > config_.max_local_entries) {
                local_.erase(local_.begin(), local_.end() - static_cast<std::ptrdiff_t>(config_.max_local_entries));
            }
            break;
        case Layer::Session:
            session_.push_back(std::move(entry));
            if (config_.max_session_entries && session_.size() > config_.max_session_entries) {
                session_.erase(session_.begin(),
                               session_.end() - static_cast<std::ptrdiff_t>(config_.max_session_entries));
            }
            break;
        case Layer::Profile:
            profile_ = std::move(entry);
            break;
    }
}

std::string HierarchicalMemory::complete(PromptKind kind, const std::vector<std::string>& inputs) {
    return llm_->complete(kind, inputs);
}

std::optional<MemoryEntry> HierarchicalMemory::append_delta(const LineDelta& delta) {
    if (!delta.new_lines.empty()) {
        for (const auto& line : delta.new_lines) {
            std::string clean = sanitize(line);
            const std::size_t n = text::length(clean);
            buffer_chars_ += n;
            chars_appended_ += n;
            buffer_.push_back(std::move(clean));
        }
        buffer_sources_.push_back("D" + std::to_string(next_delta_++));
    }
    if (buffer_chars_ < config_.flush_threshold || buffer_.empty()) return std::nullopt;

    // Ids are only consumed once the summary succeeds.
    const std::size_t saved_local = next_local_;
    std::string summary = complete(PromptKind::Summarize, {text::join(buffer_, "\n")});
    MemoryEntry entry;
    try {
        entry = make_entry(Layer::Local, std::move(summary), delta.timestamp, buffer_sources_);
    } catch (...) {
        next_local_ = saved_local;
        throw;
    }
    if (!local_.empty()) entry.created_at = std::max(entry.created_at, local_.back().created_at);

    JournalRecord rec{Layer::Local, entry.created_at, entry.text, entry.source_ids};
    chars_flushed_ += buffer_chars_;
    buffer_.clear();
    buffer_sources_.clear();
    buffer_chars_ = 0;
    commit(entry);
    if (journal_) journal_->append(rec);
    return entry;
}

std::optional<MemoryEntry> HierarchicalMemory::synthesize_session(Seconds now) {
    if (now - last_session_time_ < config_.session_period || local_.empty()) return std::nullopt;

    const auto window = newest(local_, config_.k_local);
    std::vector<std::string> inputs;
    std::vector<std::string> sources;
    for (const auto& e : window) {
        inputs.push_back(e.text);
        sources.push_back(e.id);
    }
    const std::size_t saved = next_session_;
    MemoryEntry entry;
    try {
        entry = make_entry(Layer::Session, complete(PromptKind::Integrate, inputs), now, std::move(sources));
    } catch (...) {
        next_session_ = saved;
        throw;
    }
    last_session_time_ = now;
    JournalRecord rec{Layer::Session, entry.created_at, entry.text, entry.source_ids};
    commit(entry);
    if (journal_) journal_->append(rec);
    return entry;
}

MemoryEntry HierarchicalMemory::update_profile() {
    if (session_.empty()) throw ContractViolation("update_profile requires at least one session entry");

    std::vector<std::string> inputs;
    std::vector<std::string> sources;
    if (profile_) {
        inputs.push_back(profile_->text);
        sources.push_back(profile_->id);
    }
    for (const auto& e : newest(session_, config_.k_session)) {
        inputs.push_back(e.text);
        sources.push_back(e.id);
    }
    const std::size_t saved = next_profile_;
    MemoryEntry entry;
    try {
        entry = make_entry(Layer::Profile, complete(PromptKind::UpdateProfile, inputs), session_.back().created_at,
                           std::move(sources));
    } catch (...) {
        next_profile_ = saved;
        throw;
    }
    JournalRecord rec{Layer::Profile, entry.created_at, entry.text, entry.source_ids};
    commit(entry);
    if (journal_) journal_->append(rec);
    return entry;
}

MemoryEntry HierarchicalMemory::seed_profile(const std::string& profile_text, Seconds t) {
    MemoryEntry entry = make_entry(Layer::Profile, profile_text, t, {});
    JournalRecord rec{Layer::Profile, entry.created_at, entry.text, entry.source_ids};
    commit(entry);
    if (journal_) journal_->append(rec);
    return entry;
}

ContextHits HierarchicalMemory::retrieve_context(std::span<const float> query, std::size_t per_layer) const {
    return {top_entries(local_, query, per_layer), top_entries(session_, query, per_layer), profile_};
}

MemorySnapshot HierarchicalMemory::snapshot() const {
    return {local_, session_, profile_, buffer_chars_, last_session_time_};
}

}  // namespace proseek
