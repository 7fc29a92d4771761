#include "proseek/journal.hpp"

#include <json.hpp>

#include "proseek/error.hpp"

namespace proseek {

std::string_view to_string(Layer layer) {
    switch (layer) {
        case Layer::Local: return "local";
        case Layer::Session: return "session";
        case Layer::Profile: return "profile";
    }
    return "local";
}

Layer layer_from_string(std::string_view s) {
    if (s == "local") return Layer::Local;
    if (s == "session") return Layer::Session;
    if (s == "profile") return Layer::Profile;
    throw FormatError("unknown memory layer '" + std::string(s) + "'");
}

std::string to_json_line(const JournalRecord& rec) {
    nlohmann::ordered_json j;
    j["layer"] = to_string(rec.layer);
    j["t"] = rec.t;
    j["text"] = rec.text;
    j["sources"] = rec.sources;
    return j.dump();
}

JournalRecord parse_journal_line(const std::string& line, std::size_t line_no) {
    try {
        auto j = nlohmann::json::parse(line);
        JournalRecord rec;
        rec.layer = layer_from_string(j.at("layer").get<std::string>());
        rec.t = j.at("t").get<double>();
        rec.text = j.at("text").get<std::string>();
        rec.sources = j.at("sources").get<std::vector<std::string>>();
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad journal record: ") + e.what(), line_no);
    } catch (const FormatError& e) {
        throw FormatError(e.what(), line_no);
    }
}

std::vector<JournalRecord> read_journal(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open journal " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<JournalRecord> records;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        ++line_no;
        std::size_t nl = content.find('\n', pos);
        const bool complete = nl != std::string::npos;
        std::string line = content.substr(pos, complete ? nl - pos : std::string::npos);
        pos = complete ? nl + 1 : content.size();
        if (line.empty()) continue;
        if (!complete) {
            try {
                records.push_back(parse_journal_line(line, line_no));
            } catch (const FormatError&) {
                // interrupted write
            }
            break;
        }
        records.push_back(parse_journal_line(line, line_no));
    }
    return records;
}

FileJournal::FileJournal(const std::filesystem::path& path) : out_(path, std::ios::app | std::ios::binary) {
    if (!out_) throw Error("cannot open journal " + path.string() + " for append");
}

void FileJournal::append(const JournalRecord& rec) {
    out_ << to_json_line(rec) << '\n';
    out_.flush();
    if (!out_) throw Error("journal write failed");
}

}  // namespace proseek
