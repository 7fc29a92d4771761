#include "proseek/frames.hpp"

#include <algorithm>
#include <unordered_map>

#include "proseek/error.hpp"
#include "proseek/text.hpp"

namespace proseek {

std::vector<std::string> normalize_lines(std::string_view raw) {
    std::vector<std::string> lines;
    for (const auto& line : text::split_lines(raw)) {
        std::string out;
        out.reserve(line.size());
        bool pending_space = false;
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                pending_space = !out.empty();
                continue;
            }
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(c);
        }
        if (!out.empty()) lines.push_back(std::move(out));
    }
    return lines;
}

BigramSet compute_bigrams(const std::vector<std::string>& lines) {
    BigramSet set;
    for (const auto& line : lines) {
        const std::u32string cps = text::decode(line);
        for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
            set.push_back((static_cast<Bigram>(cps[i]) << 32) | static_cast<Bigram>(cps[i + 1]));
        }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

std::string bigram_to_string(Bigram b) {
    std::string out;
    text::append_utf8(out, static_cast<char32_t>(b >> 32));
    text::append_utf8(out, static_cast<char32_t>(b & 0xFFFFFFFFu));
    return out;
}

TextFrame make_frame(std::string_view raw_text, Seconds timestamp) {
    TextFrame frame;
    frame.timestamp = timestamp;
    frame.lines = normalize_lines(raw_text);
    frame.text = text::join(frame.lines, "\n");
    frame.char_count = text::length(frame.text);
    frame.bigrams = compute_bigrams(frame.lines);
    return frame;
}

LineDelta extract_delta(const TextFrame& prev, const TextFrame& curr) {
    std::unordered_map<std::string_view, std::size_t> remaining;
    for (const auto& line : prev.lines) ++remaining[line];

    LineDelta delta;
    delta.timestamp = curr.timestamp;
    for (const auto& line : curr.lines) {
        auto it = remaining.find(line);
        if (it != remaining.end() && it->second > 0) {
            --it->second;
            continue;
        }
        delta.char_count += text::length(line);
        delta.new_lines.push_back(line);
    }
    return delta;
}

TextFrame FrameIngestor::ingest(std::string_view raw_text, Seconds timestamp) {
    if (last_ && !(timestamp > *last_)) {
        throw SequencingError("frame timestamp " + std::to_string(timestamp) +
                              " does not follow " + std::to_string(*last_));
    }
    TextFrame frame = make_frame(raw_text, timestamp);
    last_ = timestamp;
    return frame;
}

}  // namespace proseek
