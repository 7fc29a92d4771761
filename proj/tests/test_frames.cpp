#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "proseek/error.hpp"
#include "proseek/frames.hpp"
#include "proseek/text.hpp"

using namespace proseek;

namespace {

std::set<std::string> bigram_strings(const BigramSet& s) {
    std::set<std::string> out;
    for (auto b : s) out.insert(bigram_to_string(b));
    return out;
}

// Independent oracle: all 2-code-point substrings of each line.
std::set<std::string> oracle_bigrams(const std::string& text) {
    std::set<std::string> out;
    for (const auto& line : text::split_lines(text)) {
        auto cps = text::decode(line);
        for (std::size_t i = 0; i + 1 < cps.size(); ++i) out.insert(text::encode(cps.substr(i, 2)));
    }
    return out;
}

TextFrame frame_of(std::vector<std::string> lines, Seconds t) {
    return make_frame(text::join(lines, "\n"), t);
}

}  // namespace

TEST(Frames, EmptyInput) {
    FrameIngestor ing;
    auto f = ing.ingest("", 1.0);
    EXPECT_EQ(f.char_count, 0u);
    EXPECT_TRUE(f.bigrams.empty());
    EXPECT_TRUE(f.lines.empty());
}

TEST(Frames, MinimalBigram) {
    FrameIngestor ing;
    auto f = ing.ingest("ab", 2.0);
    EXPECT_EQ(f.char_count, 2u);
    EXPECT_EQ(bigram_strings(f.bigrams), (std::set<std::string>{"ab"}));
}

TEST(Frames, WhitespaceCollapse) {
    FrameIngestor ing;
    auto f = ing.ingest("the  cat", 3.0);
    EXPECT_EQ(f.text, "the cat");
    EXPECT_EQ(f.char_count, 7u);
    EXPECT_EQ(bigram_strings(f.bigrams), (std::set<std::string>{"th", "he", "e ", " c", "ca", "at"}));
}

TEST(Frames, NormalizationDropsBlankLinesAndTrims) {
    auto f = make_frame("  a\t\tb  \n\n   \n c ", 0.0);
    ASSERT_EQ(f.lines.size(), 2u);
    EXPECT_EQ(f.lines[0], "a b");
    EXPECT_EQ(f.lines[1], "c");
    EXPECT_EQ(f.text, "a b\nc");
    EXPECT_EQ(f.char_count, 5u);
}

TEST(Frames, NoBigramSpansANewline) {
    auto f = make_frame("ab\ncd", 0.0);
    EXPECT_EQ(bigram_strings(f.bigrams), (std::set<std::string>{"ab", "cd"}));
}

TEST(Frames, SequencingRejected) {
    FrameIngestor ing;
    ing.ingest("x", 5.0);
    EXPECT_THROW(ing.ingest("y", 5.0), SequencingError);
    EXPECT_THROW(ing.ingest("y", 4.0), SequencingError);
    EXPECT_NO_THROW(ing.ingest("y", 5.5));
}

TEST(Frames, DeltaExamples) {
    auto ab = frame_of({"A", "B"}, 1.0);
    EXPECT_TRUE(extract_delta(ab, frame_of({"A", "B"}, 2.0)).new_lines.empty());

    auto d = extract_delta(ab, frame_of({"B", "C", "D"}, 2.0));
    EXPECT_EQ(d.new_lines, (std::vector<std::string>{"C", "D"}));
    EXPECT_EQ(d.char_count, 2u);

    auto cold = extract_delta(make_frame("", 0.0), frame_of({"X"}, 1.0));
    EXPECT_EQ(cold.new_lines, (std::vector<std::string>{"X"}));
}

TEST(Frames, DeltaCountsDuplicatesPerOccurrence) {
    auto d = extract_delta(frame_of({"A"}, 1.0), frame_of({"A", "A", "B", "A"}, 2.0));
    EXPECT_EQ(d.new_lines, (std::vector<std::string>{"A", "B", "A"}));
}

TEST(FramesProperty, RandomFramesSatisfyInvariants) {
    std::mt19937 rng(42);
    const std::string alphabet = "ab c\t\nXY\xC3\xA9";
    std::uniform_int_distribution<std::size_t> len(0, 60), pick(0, alphabet.size() - 1);
    for (int iter = 0; iter < 500; ++iter) {
        std::string raw;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) {
            char c = alphabet[pick(rng)];
            if (static_cast<unsigned char>(c) >= 0x80) c = 'e';
            raw += c;
        }
        auto f = make_frame(raw, iter);
        auto g = make_frame(raw, iter);
        EXPECT_EQ(f.text, g.text);
        EXPECT_EQ(f.bigrams, g.bigrams);
        EXPECT_EQ(text::join(f.lines, "\n"), f.text);
        EXPECT_EQ(f.char_count, text::length(f.text));
        EXPECT_EQ(bigram_strings(f.bigrams), oracle_bigrams(f.text));
        EXPECT_TRUE(std::is_sorted(f.bigrams.begin(), f.bigrams.end()));
        EXPECT_TRUE(extract_delta(f, f).new_lines.empty());
        EXPECT_EQ(extract_delta(make_frame("", -1.0), f).new_lines, f.lines);

        auto d = extract_delta(make_frame("a\nb", -1.0), f);
        std::size_t chars = 0;
        for (const auto& l : d.new_lines) {
            EXPECT_NE(std::find(f.lines.begin(), f.lines.end(), l), f.lines.end());
            chars += text::length(l);
        }
        EXPECT_EQ(d.char_count, chars);
    }
}
