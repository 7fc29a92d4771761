#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proseek {

// A character bigram packed as (first code point << 32 | second code point).
using Bigram = std::uint64_t;

// Sorted, duplicate-free set of bigrams.
using BigramSet = std::vector<Bigram>;

// Seconds since session start.
using Seconds = double;

struct TextFrame {
    Seconds timestamp = 0.0;
    std::string text;                // lines joined by '\n'
    std::vector<std::string> lines;  // normalized, non-blank
    BigramSet bigrams;               // per-line bigrams; none span a newline
    std::size_t char_count = 0;      // code points in text, newlines included
};

struct LineDelta {
    Seconds timestamp = 0.0;
    std::vector<std::string> new_lines;
    std::size_t char_count = 0;  // code points summed over new_lines

    bool empty() const { return new_lines.empty(); }
};

// Collapses space/tab runs to one space, trims each line and drops blank lines.
std::vector<std::string> normalize_lines(std::string_view raw);

BigramSet compute_bigrams(const std::vector<std::string>& lines);

// Renders a bigram back to UTF-8, mostly for tests and diagnostics.
std::string bigram_to_string(Bigram b);

// Pure frame construction; does not check ordering.
TextFrame make_frame(std::string_view raw_text, Seconds timestamp);

// Multiset line difference: lines of `curr` not matched by an occurrence in
// `prev`, in `curr` order.
LineDelta extract_delta(const TextFrame& prev, const TextFrame& curr);

// Enforces strictly increasing timestamps for one session.
class FrameIngestor {
public:
    TextFrame ingest(std::string_view raw_text, Seconds timestamp);

    std::optional<Seconds> last_timestamp() const { return last_; }

private:
    std::optional<Seconds> last_;
};

// Identifier redaction. Replaceable so a stronger recognizer can be plugged in.
class Redactor {
public:
    virtual ~Redactor() = default;
    virtual std::string redact(std::string_view text) const = 0;
};

// URL, email, digit-run and capitalized-name-run redaction with fixed placeholders.
class PatternRedactor final : public Redactor {
public:
    std::string redact(std::string_view text) const override;
};

inline constexpr std::string_view kUrlPlaceholder = "⟨URL⟩";
inline constexpr std::string_view kEmailPlaceholder = "⟨EMAIL⟩";
inline constexpr std::string_view kNumPlaceholder = "⟨NUM⟩";
inline constexpr std::string_view kNamePlaceholder = "⟨NAME⟩";

// Applies the default PatternRedactor.
std::string sanitize(std::string_view text);

}  // namespace proseek
