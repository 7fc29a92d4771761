#include <unordered_set>

#include <json.hpp>

#include "proseek/error.hpp"
#include "proseek/kernels.hpp"
#include "proseek/retrieval.hpp"
#include "proseek/text.hpp"

namespace proseek {

CorpusDocument parse_corpus_record(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("record is not an object");

    auto string_field = [&](const char* key, bool required) -> std::optional<std::string> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
            if (required) throw FormatError(std::string("missing '") + key + "'");
            return std::nullopt;
        }
        if (!it->is_string()) throw FormatError(std::string("'") + key + "' is not a string");
        return it->get<std::string>();
    };

    CorpusDocument doc;
    doc.doc_id = *string_field("id", true);
    if (doc.doc_id.empty()) throw FormatError("empty 'id'");
    doc.title = *string_field("title", true);
    doc.abstract = string_field("abstract", false).value_or("");
    doc.url = string_field("url", false);
    if (auto it = j.find("authors"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw FormatError("'authors' is not an array");
        for (const auto& a : *it) {
            if (!a.is_string()) throw FormatError("'authors' holds a non-string");
            doc.authors.push_back(a.get<std::string>());
        }
    }
    if (auto it = j.find("year"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw FormatError("'year' is not an integer");
        doc.year = it->get<int>();
    }
    return doc;
}

std::string passage_text(const CorpusDocument& doc) { return "passage: " + doc.title + " " + doc.abstract; }

std::string query_text(std::string_view input) {
    static constexpr std::string_view prefix = "query: ";
    if (input.empty()) throw ContractViolation("embed_query: text must be nonempty");
    if (input.starts_with(prefix)) return std::string(input);
    return std::string(prefix) + std::string(input);
}

std::vector<float> embed_query(const Embedder& embedder, std::string_view input) {
    return embedder.embed(query_text(input));
}

VectorIndex ingest_corpus(std::istream& records, const Embedder& embedder, MetadataStore& store, IngestStats& stats) {
    std::vector<CorpusDocument> kept;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(records, line)) {
        if (text::trim(line).empty()) continue;
        ++stats.records_in;
        CorpusDocument doc;
        try {
            doc = parse_corpus_record(line);
        } catch (const FormatError&) {
            ++stats.malformed;
            continue;
        }
        if (text::trim(doc.abstract).empty()) {
            ++stats.filtered_no_abstract;
            continue;
        }
        if (!seen.insert(doc.doc_id).second) {
            ++stats.rejected_duplicate;
            continue;
        }
        kept.push_back(std::move(doc));
    }

    std::vector<std::string> passages;
    passages.reserve(kept.size());
    for (const auto& d : kept) passages.push_back(passage_text(d));
    const auto vectors = kernels::parallel::embed_all(embedder, passages);

    VectorIndex index(embedder.dimension());
    store.begin();
    try {
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (!store.insert(kept[i])) {
                ++stats.rejected_duplicate;  // already present in a reused store
                continue;
            }
            index.add(kept[i].doc_id, vectors[i]);
            ++stats.indexed;
        }
    } catch (...) {
        store.commit();
        throw;
    }
    store.commit();
    index.seal();
    return index;
}

std::vector<SearchResult> search(const VectorIndex& index, const MetadataStore& store, std::span<const float> query,
                                 std::size_t k) {
    std::vector<SearchResult> out;
    for (auto& hit : index.search(query, k)) {
        auto doc = store.get(hit.doc_id);
        if (!doc) continue;
        out.push_back({std::move(hit.doc_id), hit.score, out.size() + 1, std::move(*doc)});
    }
    return out;
}

std::filesystem::path metadata_path_for(const std::filesystem::path& index_path) {
    return std::filesystem::path(index_path.string() + ".meta.sqlite");
}

std::shared_ptr<const SearchBackend> SearchBackend::open(const std::filesystem::path& index_path) {
    if (!std::filesystem::exists(index_path)) throw Error("index not found: " + index_path.string());
    const auto meta = metadata_path_for(index_path);
    if (!std::filesystem::exists(meta)) throw Error("metadata store not found: " + meta.string());
    auto backend = std::make_shared<SearchBackend>(SearchBackend{VectorIndex::load(index_path), nullptr});
    backend->store = std::make_unique<MetadataStore>(meta.string());
    return backend;
}

}  // namespace proseek
