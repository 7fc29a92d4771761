#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "proseek/frames.hpp"

namespace proseek {

namespace {

using Span = std::pair<std::size_t, std::size_t>;  // [begin, end)

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_scheme_char(char c) { return is_alpha(c) || is_digit(c) || c == '+' || c == '.' || c == '-'; }
bool is_email_local(char c) {
    return is_alpha(c) || is_digit(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool is_domain_char(char c) { return is_alpha(c) || is_digit(c) || c == '.' || c == '-'; }
bool is_trailing_punct(char c) {
    switch (c) {
        case '.': case ',': case ';': case ':': case '!': case '?':
        case ')': case ']': case '}': case '\'': case '"':
            return true;
        default:
            return false;
    }
}

// End of the URL body starting at `body`: the non-space run minus trailing punctuation.
std::size_t url_end(std::string_view s, std::size_t body) {
    std::size_t e = body;
    while (e < s.size() && !is_space(s[e])) ++e;
    while (e > body && is_trailing_punct(s[e - 1])) --e;
    return e;
}

std::optional<Span> find_scheme_url(std::string_view s, std::size_t from) {
    std::size_t p = s.find("://", from);
    while (p != std::string_view::npos) {
        std::size_t q = p;
        while (q > from && is_scheme_char(s[q - 1])) --q;
        while (q < p && !is_alpha(s[q])) ++q;
        if (q < p) return Span{q, url_end(s, p + 3)};
        p = s.find("://", p + 1);
    }
    return std::nullopt;
}

std::optional<Span> find_www_url(std::string_view s, std::size_t from) {
    std::size_t p = s.find("www.", from);
    if (p == std::string_view::npos) return std::nullopt;
    return Span{p, url_end(s, p + 4)};
}

std::optional<Span> find_url(std::string_view s, std::size_t from) {
    auto a = find_scheme_url(s, from);
    auto b = find_www_url(s, from);
    if (a && b) return a->first <= b->first ? a : b;
    return a ? a : b;
}

std::optional<Span> find_email(std::string_view s, std::size_t from) {
    std::size_t at = s.find('@', from);
    while (at != std::string_view::npos) {
        std::size_t b = at;
        while (b > from && is_email_local(s[b - 1])) --b;
        if (b < at) {
            std::size_t e = at + 1;
            while (e < s.size() && is_domain_char(s[e])) ++e;
            // Longest domain ending in '.' + two or more letters, with a label before it.
            for (std::size_t end = e; end > at + 1; --end) {
                std::size_t k = end;
                while (k > at + 1 && is_alpha(s[k - 1])) --k;
                const std::size_t letters = end - k;
                if (letters >= 2 && k >= at + 3 && s[k - 1] == '.') return Span{b, end};
            }
        }
        at = s.find('@', at + 1);
    }
    return std::nullopt;
}

std::optional<Span> find_digits(std::string_view s, std::size_t from) {
    std::size_t b = from;
    while (b < s.size() && !is_digit(s[b])) ++b;
    if (b == s.size()) return std::nullopt;
    std::size_t e = b;
    while (e < s.size() && is_digit(s[e])) ++e;
    return Span{b, e};
}

// Letter run [b, e) that is the interior of a placeholder such as ⟨NAME⟩.
bool inside_placeholder(std::string_view s, std::size_t b, std::size_t e) {
    static constexpr std::string_view open = "⟨";
    static constexpr std::string_view close = "⟩";
    return b >= open.size() && s.substr(b - open.size(), open.size()) == open &&
           s.substr(e, close.size()) == close;
}

std::optional<Span> find_name_run(std::string_view s, std::size_t from) {
    std::size_t i = from;
    while (i < s.size()) {
        if (!is_alpha(s[i])) {
            ++i;
            continue;
        }
        std::size_t run_begin = i;
        std::size_t run_end = i;
        std::size_t tokens = 0;
        std::size_t j = i;
        while (true) {
            std::size_t e = j;
            while (e < s.size() && is_alpha(s[e])) ++e;
            const bool capitalized = is_upper(s[j]) && !inside_placeholder(s, j, e);
            if (!capitalized) break;
            ++tokens;
            run_end = e;
            std::size_t k = e;
            while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
            if (k == e || k >= s.size() || !is_alpha(s[k])) break;
            j = k;
        }
        if (tokens >= 2) return Span{run_begin, run_end};
        // Skip the whole first token.
        while (i < s.size() && is_alpha(s[i])) ++i;
    }
    return std::nullopt;
}

template <typename Finder>
std::string replace_all(std::string_view s, Finder find, std::string_view placeholder) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto m = find(s, pos);
        if (!m) break;
        out.append(s.substr(pos, m->first - pos));
        out.append(placeholder);
        pos = m->second;
    }
    if (pos < s.size()) out.append(s.substr(pos));
    return out;
}

}  // namespace

std::string PatternRedactor::redact(std::string_view text) const {
    std::string s = replace_all(text, find_url, kUrlPlaceholder);
    s = replace_all(s, find_email, kEmailPlaceholder);
    s = replace_all(s, find_digits, kNumPlaceholder);
    s = replace_all(s, find_name_run, kNamePlaceholder);
    return s;
}

std::string sanitize(std::string_view text) {
    static const PatternRedactor redactor;
    return redactor.redact(text);
}

}  // namespace proseek
