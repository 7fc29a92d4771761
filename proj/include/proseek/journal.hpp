#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "proseek/frames.hpp"

namespace proseek {

enum class Layer { Local, Session, Profile };

std::string_view to_string(Layer layer);
Layer layer_from_string(std::string_view s);  // throws FormatError

// One line of the append-only memory journal:
// {"layer": "local|session|profile", "t": seconds, "text": string, "sources": [ids]}
struct JournalRecord {
    Layer layer = Layer::Local;
    Seconds t = 0.0;
    std::string text;
    std::vector<std::string> sources;

    bool operator==(const JournalRecord&) const = default;
};

std::string to_json_line(const JournalRecord& rec);
JournalRecord parse_journal_line(const std::string& line, std::size_t line_no);

// Reads a journal file. A truncated final line (no trailing newline, not valid
// JSON) is treated as an interrupted write and ignored; any other malformed
// line throws FormatError with its line number.
std::vector<JournalRecord> read_journal(const std::filesystem::path& path);

class JournalSink {
public:
    virtual ~JournalSink() = default;
    virtual void append(const JournalRecord& rec) = 0;
};

// Appends records to a file, flushing each line to the OS before returning.
class FileJournal final : public JournalSink {
public:
    explicit FileJournal(const std::filesystem::path& path);

    void append(const JournalRecord& rec) override;

private:
    std::ofstream out_;
};

class VectorJournal final : public JournalSink {
public:
    void append(const JournalRecord& rec) override { records.push_back(rec); }
    std::vector<JournalRecord> records;
};

}  // namespace proseek
