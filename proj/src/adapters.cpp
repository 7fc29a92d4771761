#include "proseek/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "proseek/error.hpp"
#include "proseek/text.hpp"

namespace proseek {

std::string_view to_string(PromptKind kind) {
    switch (kind) {
        case PromptKind::Summarize: return "summarize";
        case PromptKind::Integrate: return "integrate";
        case PromptKind::UpdateProfile: return "update_profile";
        case PromptKind::AskExplore: return "ask_explore";
        case PromptKind::AskClarify: return "ask_clarify";
    }
    return "unknown";
}

namespace {

void require_inputs(std::span<const std::string> inputs) {
    if (inputs.empty()) throw ContractViolation("llm_complete: inputs must be nonempty");
}

std::string single_line(std::string_view s) {
    std::string out(s);
    std::replace(out.begin(), out.end(), '\n', ' ');
    return out;
}

std::string join_span(std::span<const std::string> parts, std::string_view sep, bool skip_empty) {
    std::string out;
    bool first = true;
    for (const auto& p : parts) {
        if (skip_empty && p.empty()) continue;
        if (!first) out += sep;
        out += p;
        first = false;
    }
    return out;
}

std::string identity_memory(PromptKind kind, std::span<const std::string> inputs) {
    switch (kind) {
        case PromptKind::Summarize:
            return text::head(join_span(inputs, " ", false), IdentityLlm::kSummaryChars);
        case PromptKind::Integrate:
            return text::head(join_span(inputs, " | ", false), IdentityLlm::kIntegrateChars);
        case PromptKind::UpdateProfile:
            return text::head(join_span(inputs, " | ", true), IdentityLlm::kProfileChars);
        default:
            return {};
    }
}

bool is_memory_kind(PromptKind kind) {
    return kind == PromptKind::Summarize || kind == PromptKind::Integrate || kind == PromptKind::UpdateProfile;
}

const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> words = {
        "the", "and", "for", "are", "but", "not", "you", "all", "any", "can", "had", "her", "was", "one",
        "our", "out", "has", "have", "his", "how", "its", "may", "new", "now", "old", "see", "two", "who",
        "did", "get", "him", "let", "say", "she", "too", "use", "with", "this", "that", "from", "they",
        "will", "would", "there", "their", "what", "about", "which", "when", "make", "like", "time", "just",
        "know", "take", "into", "your", "some", "could", "them", "than", "then", "look", "only", "come",
        "over", "also", "back", "after", "first", "well", "even", "want", "because", "these", "give",
        "most", "such", "were", "been", "being", "does", "each", "more", "other", "very", "where", "while",
        "both", "between", "under", "using", "used", "user", "users", "include", "includes", "including",
        "primary", "interests", "focus", "focusing", "specializing", "researcher", "prioritizes", "over",
        "via", "per", "should", "through", "those", "here", "same", "within", "without", "upon",
        // placeholder words left behind by sanitization
        "url", "email", "num", "name"};
    return words;
}

}  // namespace

std::vector<std::string> top_keywords(std::string_view s, std::size_t n) {
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, first index
    std::size_t order = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        auto is_letter = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
        if (!is_letter(s[i])) {
            ++i;
            continue;
        }
        std::size_t e = i;
        while (e < s.size() && is_letter(s[e])) ++e;
        std::string token = text::to_lower_ascii(s.substr(i, e - i));
        i = e;
        if (token.size() < 3 || stopwords().contains(token)) continue;
        auto [it, inserted] = stats.try_emplace(std::move(token), 0, order);
        if (inserted) ++order;
        ++it->second.first;
    }
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(stats.begin(), stats.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first > b.second.first;
        return a.second.second < b.second.second;
    });
    std::vector<std::string> out;
    for (std::size_t k = 0; k < ranked.size() && k < n; ++k) out.push_back(ranked[k].first);
    return out;
}

std::string IdentityLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    require_inputs(inputs);
    if (is_memory_kind(kind)) return identity_memory(kind, inputs);
    return "What is known about " + single_line(text::head(inputs.back(), 120)) + "?";
}

std::string TemplateLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    require_inputs(inputs);
    if (is_memory_kind(kind)) return identity_memory(kind, inputs);

    const std::string& profile = inputs.front();
    const std::string& screen = inputs.back();
    auto profile_kw = top_keywords(profile, 1);
    if (profile_kw.empty() && inputs.size() > 2) {
        profile_kw = top_keywords(join_span(inputs.subspan(1, inputs.size() - 2), " ", false), 1);
    }
    const std::string focus = profile_kw.empty() ? "this topic" : profile_kw.front();
    const auto screen_kw = top_keywords(screen, lines_);

    std::string out;
    for (std::size_t i = 0; i < lines_; ++i) {
        const std::string subject = screen_kw.empty() ? "the current text" : screen_kw[i % screen_kw.size()];
        if (i) out += '\n';
        if (kind == PromptKind::AskExplore) {
            out += "What related work addresses " + focus + " in the context of " + subject + "?";
        } else {
            out += std::string(kClarifyMarker) + "What does " + subject + " mean with respect to " + focus + "?";
        }
    }
    return out;
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw ContractViolation("embedder dimension must be positive");
}

std::size_t HashEmbedder::bucket(std::u32string_view gram) const {
    // FNV-1a over the code points, then Fibonacci multiplicative hashing.
    std::uint64_t h = 1469598103934665603ull;
    for (char32_t cp : gram) {
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (static_cast<std::uint64_t>(cp) >> shift) & 0xFFu;
            h *= 1099511628211ull;
        }
    }
    const std::uint64_t mixed = h * 11400714819323198485ull;
    return static_cast<std::size_t>((mixed >> 32) % dimension_);
}

std::vector<float> HashEmbedder::embed(std::string_view input) const {
    if (input.empty()) throw ContractViolation("embed: text must be nonempty");
    const std::u32string cps = text::decode(text::to_lower_ascii(input));
    std::vector<double> counts(dimension_, 0.0);
    if (cps.size() < 3) {
        counts[bucket(cps)] += 1.0;
    } else {
        for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
            counts[bucket(std::u32string_view(cps).substr(i, 3))] += 1.0;
        }
    }
    double norm = 0.0;
    for (double c : counts) norm += c * c;
    norm = std::sqrt(norm);
    std::vector<float> out(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) out[i] = static_cast<float>(counts[i] / norm);
    return out;
}

std::string AuditingLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    AdapterCallRecord rec{kind, std::vector<std::string>(inputs.begin(), inputs.end()), {}, 0.0, false};
    const auto start = std::chrono::steady_clock::now();
    try {
        rec.output = inner_->complete(kind, inputs);
    } catch (...) {
        rec.failed = true;
        rec.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::lock_guard lock(mu_);
        records_.push_back(std::move(rec));
        throw;
    }
    rec.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string out = rec.output;
    std::lock_guard lock(mu_);
    records_.push_back(std::move(rec));
    return out;
}

std::vector<AdapterCallRecord> AuditingLlm::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t AuditingLlm::call_count() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

void AuditingLlm::clear() {
    std::lock_guard lock(mu_);
    records_.clear();
}

std::string TimeoutLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    auto task = std::make_shared<std::packaged_task<std::string()>>(
        [inner = inner_, kind, args = std::vector<std::string>(inputs.begin(), inputs.end())] {
            return inner->complete(kind, args);
        });
    auto result = task->get_future();
    std::thread([task] { (*task)(); }).detach();
    if (result.wait_for(timeout_) != std::future_status::ready) {
        throw AdapterError(std::string(to_string(kind)) + " call timed out after " +
                           std::to_string(timeout_.count()) + " ms");
    }
    return result.get();
}

std::string SerializedLlm::complete(PromptKind kind, std::span<const std::string> inputs) {
    std::lock_guard lock(mu_);
    return inner_->complete(kind, inputs);
}

}  // namespace proseek
