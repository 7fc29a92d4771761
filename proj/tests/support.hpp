#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "proseek/text.hpp"

namespace testsupport {

// Removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("proseek-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// A single line of `chars` random CJK ideographs. Distinct seeds give pages
// that share essentially no bigrams.
inline std::string cjk_page(std::uint32_t seed, std::size_t chars) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::uint32_t> cp(0x4E00, 0x9FFF);
    std::string out;
    for (std::size_t i = 0; i < chars; ++i) proseek::text::append_utf8(out, static_cast<char32_t>(cp(rng)));
    return out;
}

// Lowercase English-looking prose of exactly `chars` characters built from
// `words`, on one line.
inline std::string word_page(const std::vector<std::string>& words, std::size_t chars, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::string out;
    while (out.size() < chars) {
        if (!out.empty()) out += ' ';
        out += words[pick(rng)];
    }
    out.resize(chars);
    if (out.back() == ' ') out.back() = 'x';
    return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::trunc);
    os << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

inline double norm(const std::vector<float>& v) {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
}

// Oracle patterns for the sanitizer, written independently of its scanner.
inline bool has_identifier_pattern(const std::string& s) {
    static const std::regex url(R"(([A-Za-z][A-Za-z0-9+.\-]*://)|(www\.))");
    static const std::regex email(R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,})");
    static const std::regex digit(R"([0-9])");
    return std::regex_search(s, url) || std::regex_search(s, email) || std::regex_search(s, digit);
}

// Random text seeded with URLs, emails, digit runs, names and near misses.
inline std::string random_identifier_string(std::mt19937& rng) {
    static const std::vector<std::string> pieces = {
        "see", "the", "page", "and", "of", "Alice Smith", "Bob", "Data Science Lab", ",", ".", ";", "(", ")", "!",
        "https://x.org/a", "http://example.com/path?q=1&r=2", "ftp://files.example.net/pub", "www.site.io/x.",
        "a@b.com", "first.last+tag@mail.example.co.uk", "x_y%z@host-name.org", "42", "3.14159", "2024-10-15",
        "v2", "ISBN 978-3-16", "\xE6\x97\xA5\xE6\x9C\xAC", "\xE2\x9F\xA8NUM\xE2\x9F\xA9", "@", "://", "www", "mail@",
        "trailing.", "CamelCase", "Mc Donald", "NASA JPL", "a1b2c3", "user@localhost", "x.y", "s3://bucket/key",
    };
    std::uniform_int_distribution<std::size_t> count(1, 14), pick(0, pieces.size() - 1), sep(0, 5);
    std::string s;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        switch (sep(rng)) {
            case 0: break;
            case 1: s += "\t"; break;
            default: s += " "; break;
        }
        s += pieces[pick(rng)];
    }
    return s;
}

// Short abstracts over a handful of topics, one JSON object per line.
inline std::string toy_corpus_jsonl(std::size_t n = 50) {
    struct Topic {
        const char* title;
        const char* abstract;
    };
    static const Topic topics[] = {
        {"Reducing inference latency in language models",
         "We study latency of transformer inference and propose quantization and speculative decoding to cut latency."},
        {"Trust calibration in explainable interfaces",
         "Users over-trust automated advice; we design explanations that calibrate trust in decision support."},
        {"Dense passage retrieval for scientific literature",
         "A dual encoder retrieves scientific papers for natural language questions using nearest neighbor search."},
        {"Hierarchical summarization of long documents",
         "Local summaries are merged into section and document summaries to keep long context within budget."},
        {"Reading behavior and attention on screens",
         "Scrolling speed and dwell time reveal where readers struggle with dense technical passages."},
    };
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const Topic& t = topics[i % std::size(topics)];
        const std::size_t variant = i / std::size(topics);
        nlohmann::json j;
        j["id"] = "doc-" + std::to_string(1000 + i);
        j["title"] = std::string(t.title) + " part " + std::to_string(variant + 1);
        j["abstract"] = std::string(t.abstract) + " Study " + std::to_string(variant + 1) + " of this line of work.";
        j["authors"] = {"A. Author", "B. Writer"};
        j["year"] = 2015 + static_cast<int>(i % 10);
        j["url"] = "https://papers.example.org/" + std::to_string(1000 + i);
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace testsupport
