#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proseek/adapters.hpp"
#include "proseek/vector_index.hpp"

struct sqlite3;

namespace proseek {

struct CorpusDocument {
    std::string doc_id;
    std::string title;
    std::string abstract;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::optional<std::string> url;

    bool operator==(const CorpusDocument&) const = default;
};

// Keyed document metadata in a SQLite database. Reads are safe from any
// number of threads.
class MetadataStore {
public:
    // ":memory:" gives a private in-memory store.
    explicit MetadataStore(const std::string& path = ":memory:");
    ~MetadataStore();
    MetadataStore(const MetadataStore&) = delete;
    MetadataStore& operator=(const MetadataStore&) = delete;

    // Returns false when the id already exists.
    bool insert(const CorpusDocument& doc);
    std::optional<CorpusDocument> get(const std::string& doc_id) const;
    std::size_t size() const;

    void begin();
    void commit();

private:
    void exec(const char* sql) const;

    sqlite3* db_ = nullptr;
    mutable std::mutex mu_;
};

struct IngestStats {
    std::size_t records_in = 0;
    std::size_t indexed = 0;
    std::size_t filtered_no_abstract = 0;
    std::size_t rejected_duplicate = 0;
    std::size_t malformed = 0;
};

// Parses one corpus line:
// {"id": str, "title": str, "abstract": str|null, "authors": [str], "year": int|null, "url": str|null}
// Throws FormatError when the record is malformed. An absent or null
// abstract comes back empty.
CorpusDocument parse_corpus_record(const std::string& line);

// "passage: " + title + " " + abstract
std::string passage_text(const CorpusDocument& doc);

// "query: " + text, without doubling an existing prefix. Throws ContractViolation on empty text.
std::string query_text(std::string_view text);
std::vector<float> embed_query(const Embedder& embedder, std::string_view text);

// Reads JSON lines, drops records without an abstract, rejects duplicate ids
// and malformed lines, embeds the rest and writes metadata to `store`. The
// returned index is sealed.
VectorIndex ingest_corpus(std::istream& records, const Embedder& embedder, MetadataStore& store, IngestStats& stats);

struct SearchResult {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
    CorpusDocument metadata;
};

// Nearest-neighbour search with metadata resolution. Hits missing from the
// store are skipped.
std::vector<SearchResult> search(const VectorIndex& index, const MetadataStore& store, std::span<const float> query,
                                 std::size_t k);

// The metadata database kept next to an index file.
std::filesystem::path metadata_path_for(const std::filesystem::path& index_path);

// A sealed index with its metadata, shared read-only by searchers.
struct SearchBackend {
    VectorIndex index;
    std::unique_ptr<MetadataStore> store;

    static std::shared_ptr<const SearchBackend> open(const std::filesystem::path& index_path);
};

}  // namespace proseek
