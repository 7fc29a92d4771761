#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "proseek/adapters.hpp"
#include "proseek/error.hpp"
#include "proseek/retrieval.hpp"
#include "proseek/vector_index.hpp"
#include "support.hpp"

using namespace proseek;

namespace {

class RecordingEmbedder final : public Embedder {
public:
    std::size_t dimension() const override { return inner.dimension(); }
    std::vector<float> embed(std::string_view t) const override {
        std::lock_guard lock(mu);
        seen.emplace_back(t);
        return inner.embed(t);
    }
    HashEmbedder inner{32};
    mutable std::mutex mu;
    mutable std::vector<std::string> seen;
};

std::string record(const std::string& id, const nlohmann::json& abstract) {
    nlohmann::json j;
    j["id"] = id;
    j["title"] = "Title " + id;
    j["abstract"] = abstract;
    j["authors"] = {"X"};
    j["year"] = 2020;
    j["url"] = nullptr;
    return j.dump();
}

std::vector<std::pair<std::string, double>> brute_force(const VectorIndex& index, const std::vector<float>& q,
                                                        std::size_t k) {
    std::vector<std::pair<std::string, double>> all;
    for (std::size_t r = 0; r < index.size(); ++r) {
        auto v = index.vector(r);
        double s = 0;
        for (std::size_t d = 0; d < q.size(); ++d) s += static_cast<double>(v[d]) * q[d];
        all.emplace_back(index.ids()[r], s);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

}  // namespace

TEST(Corpus, ParseRecord) {
    auto d = parse_corpus_record(
        R"({"id":"p1","title":"T","abstract":"A","authors":["a","b"],"year":2021,"url":"https://u"})");
    EXPECT_EQ(d.doc_id, "p1");
    EXPECT_EQ(d.authors, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(*d.year, 2021);
    EXPECT_EQ(*d.url, "https://u");
    auto n = parse_corpus_record(R"({"id":"p2","title":"T","abstract":null,"authors":[],"year":null,"url":null})");
    EXPECT_TRUE(n.abstract.empty());
    EXPECT_FALSE(n.year);
    EXPECT_THROW(parse_corpus_record("{"), FormatError);
    EXPECT_THROW(parse_corpus_record(R"({"title":"T"})"), FormatError);
    EXPECT_THROW(parse_corpus_record(R"({"id":"x","title":"T","year":"2020"})"), FormatError);
}

TEST(Corpus, IngestFiltersAbstracts) {
    std::string in;
    for (int i = 0; i < 10; ++i) in += record("d" + std::to_string(i), i < 3 ? nlohmann::json(nullptr) : nlohmann::json("abstract " + std::to_string(i))) + "\n";
    std::istringstream is(in);
    HashEmbedder emb(32);
    MetadataStore store;
    IngestStats stats;
    auto index = ingest_corpus(is, emb, store, stats);
    EXPECT_EQ(index.size(), 7u);
    EXPECT_EQ(stats.filtered_no_abstract, 3u);
    EXPECT_EQ(stats.indexed, 7u);
    EXPECT_EQ(store.size(), 7u);
    EXPECT_TRUE(index.sealed());
}

TEST(Corpus, EmptyStream) {
    std::istringstream is("");
    HashEmbedder emb(32);
    MetadataStore store;
    IngestStats stats;
    auto index = ingest_corpus(is, emb, store, stats);
    EXPECT_EQ(index.size(), 0u);
    EXPECT_EQ(stats.records_in, 0u);
}

TEST(Corpus, DuplicatesAndMalformedCounted) {
    std::string in = record("a", "x") + "\n" + record("a", "y") + "\n" + "garbage\n" + record("b", "") + "\n" +
                     record("c", "z") + "\n";
    std::istringstream is(in);
    HashEmbedder emb(32);
    MetadataStore store;
    IngestStats stats;
    auto index = ingest_corpus(is, emb, store, stats);
    EXPECT_EQ(stats.records_in, 5u);
    EXPECT_EQ(stats.indexed, 2u);
    EXPECT_EQ(stats.rejected_duplicate, 1u);
    EXPECT_EQ(stats.malformed, 1u);
    EXPECT_EQ(stats.filtered_no_abstract, 1u);
    EXPECT_EQ(store.get("a")->abstract, "x");
}

TEST(CorpusProperty, IngestConservation) {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> kind(0, 4), id(0, 40);
    for (int trial = 0; trial < 30; ++trial) {
        std::string in;
        const int n = trial * 3;
        for (int i = 0; i < n; ++i) {
            const std::string doc = "d" + std::to_string(id(rng));
            switch (kind(rng)) {
                case 0: in += "{not json\n"; break;
                case 1: in += record(doc, nullptr) + "\n"; break;
                default: in += record(doc, "abstract of " + doc) + "\n"; break;
            }
        }
        std::istringstream is(in);
        HashEmbedder emb(16);
        MetadataStore store;
        IngestStats s;
        auto index = ingest_corpus(is, emb, store, s);
        EXPECT_EQ(s.records_in, s.indexed + s.filtered_no_abstract + s.rejected_duplicate + s.malformed);
        EXPECT_EQ(index.size(), s.indexed);
    }
}

TEST(Corpus, PassageAndQueryPrefixes) {
    CorpusDocument d;
    d.title = "Title";
    d.abstract = "Abstract.";
    EXPECT_EQ(passage_text(d), "passage: Title Abstract.");
    RecordingEmbedder emb;
    embed_query(emb, "x");
    embed_query(emb, "query: x");
    embed_query(emb, "passage: x");
    EXPECT_EQ(emb.seen, (std::vector<std::string>{"query: x", "query: x", "query: passage: x"}));
    EXPECT_THROW(embed_query(emb, ""), ContractViolation);
    auto v = embed_query(emb.inner, "anything");
    EXPECT_NEAR(testsupport::norm(v), 1.0, 1e-6);
    EXPECT_EQ(v, embed_query(emb.inner, "anything"));
}

TEST(Index, Contracts) {
    VectorIndex index(4);
    std::vector<float> unit = {1, 0, 0, 0};
    index.add("a", unit);
    EXPECT_THROW(index.add("a", unit), ContractViolation);
    std::vector<float> wrong_dim = {1, 0, 0};
    EXPECT_THROW(index.add("b", wrong_dim), ContractViolation);
    std::vector<float> not_unit = {1, 1, 0, 0};
    EXPECT_THROW(index.add("b", not_unit), ContractViolation);
    index.seal();
    EXPECT_THROW(index.add("c", unit), ContractViolation);
    EXPECT_THROW(index.search(wrong_dim, 1), ContractViolation);
    EXPECT_TRUE(index.search(unit, 0).empty());
}

TEST(Index, SelfQueryRanksFirst) {
    HashEmbedder emb(384);
    VectorIndex index(384);
    std::vector<std::string> texts = {"passage: alpha beta", "passage: gamma delta", "passage: epsilon zeta"};
    for (std::size_t i = 0; i < texts.size(); ++i) index.add("d" + std::to_string(i), emb.embed(texts[i]));
    auto hits = index.search(emb.embed(texts[1]), 3);
    ASSERT_EQ(hits.size(), 3u);
    EXPECT_EQ(hits[0].doc_id, "d1");
    EXPECT_NEAR(hits[0].score, 1.0, 1e-6);
    for (std::size_t i = 1; i < hits.size(); ++i) EXPECT_GE(hits[i - 1].score, hits[i].score);
}

TEST(Index, ExactAgainstBruteForce) {
    HashEmbedder emb(64);
    std::mt19937 rng(77);
    const std::vector<std::string> words = {"graph", "neural", "latency", "trust", "memory", "reader", "scroll"};
    for (std::size_t n : {1, 10, 257, 2000}) {
        VectorIndex index(64);
        for (std::size_t i = 0; i < n; ++i) index.add("doc" + std::to_string(i), emb.embed(testsupport::word_page(words, 40, rng())));
        index.seal();
        for (int q = 0; q < 20; ++q) {
            auto query = emb.embed(testsupport::word_page(words, 30, rng()));
            for (std::size_t k : {1, 10, 50}) {
                auto expect = brute_force(index, query, k);
                auto got = index.search(query, k);
                auto serial = index.search_serial(query, k);
                ASSERT_EQ(got.size(), expect.size());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    EXPECT_EQ(got[i].doc_id, expect[i].first);
                    EXPECT_EQ(got[i].score, expect[i].second);
                    EXPECT_EQ(serial[i].doc_id, got[i].doc_id);
                    EXPECT_LE(std::abs(got[i].score), 1.0 + 1e-6);
                }
            }
        }
    }
}

TEST(Index, SaveLoadRoundTrip) {
    testsupport::TempDir dir;
    HashEmbedder emb(48);
    VectorIndex index(48);
    for (int i = 0; i < 100; ++i) index.add("doc-\xC3\xA9-" + std::to_string(i), emb.embed("text " + std::to_string(i * 7)));
    index.seal();
    index.save(dir / "i.pmix");
    auto loaded = VectorIndex::load(dir / "i.pmix");
    EXPECT_EQ(loaded.size(), 100u);
    EXPECT_EQ(loaded.dimension(), 48u);
    EXPECT_EQ(loaded.ids(), index.ids());
    for (int q = 0; q < 20; ++q) {
        auto query = emb.embed("query " + std::to_string(q));
        auto a = index.search(query, 10), b = loaded.search(query, 10);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].doc_id, b[i].doc_id);
            EXPECT_EQ(a[i].score, b[i].score);
        }
    }
    loaded.save(dir / "j.pmix");
    EXPECT_EQ(testsupport::read_file(dir / "i.pmix"), testsupport::read_file(dir / "j.pmix"));
}

TEST(Index, FileLayout) {
    testsupport::TempDir dir;
    VectorIndex index(2);
    std::vector<float> v = {0.6f, 0.8f};
    index.add("ab", v);
    index.save(dir / "x");
    const std::string bytes = testsupport::read_file(dir / "x");
    ASSERT_EQ(bytes.size(), 5u + 4 + 8 + 4 + 2 + 8);
    EXPECT_EQ(bytes.substr(0, 5), "PMIX1");
    EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 2u);  // dim, little endian
    EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 1u);  // count
    EXPECT_EQ(static_cast<unsigned char>(bytes[17]), 2u);  // id length
    EXPECT_EQ(bytes.substr(21, 2), "ab");
    float f = 0;
    std::memcpy(&f, bytes.data() + 23, 4);
    EXPECT_EQ(f, 0.6f);
}

TEST(Index, LoadRejectsBadFiles) {
    testsupport::TempDir dir;
    testsupport::write_file(dir / "bad", "NOPE1xxxxxxxxxxxx");
    EXPECT_THROW(VectorIndex::load(dir / "bad"), FormatError);
    VectorIndex index(4);
    std::vector<float> v = {1, 0, 0, 0};
    index.add("a", v);
    index.save(dir / "ok");
    std::string bytes = testsupport::read_file(dir / "ok");
    testsupport::write_file(dir / "trunc", bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(VectorIndex::load(dir / "trunc"), FormatError);
}

TEST(MetadataStore, RoundTripAndConcurrentReads) {
    testsupport::TempDir dir;
    const auto path = (dir / "m.sqlite").string();
    CorpusDocument d{"id1", "T \xE6\x97\xA5", "abs", {"A", "B"}, 2001, std::string("https://x")};
    CorpusDocument e{"id2", "T2", "abs2", {}, std::nullopt, std::nullopt};
    {
        MetadataStore store(path);
        EXPECT_TRUE(store.insert(d));
        EXPECT_TRUE(store.insert(e));
        EXPECT_FALSE(store.insert(d));
    }
    MetadataStore store(path);
    EXPECT_EQ(store.size(), 2u);
    EXPECT_EQ(*store.get("id1"), d);
    EXPECT_EQ(*store.get("id2"), e);
    EXPECT_FALSE(store.get("nope"));
    std::vector<std::thread> readers;
    std::atomic<int> ok{0};
    for (int i = 0; i < 8; ++i) {
        readers.emplace_back([&] {
            for (int j = 0; j < 50; ++j)
                if (store.get("id1") == d) ++ok;
        });
    }
    for (auto& t : readers) t.join();
    EXPECT_EQ(ok.load(), 400);
}

TEST(Search, ResolvesMetadataAndRanks) {
    testsupport::TempDir dir;
    std::istringstream is(testsupport::toy_corpus_jsonl(50));
    HashEmbedder emb(384);
    MetadataStore store;
    IngestStats stats;
    auto index = ingest_corpus(is, emb, store, stats);
    ASSERT_EQ(index.size(), 50u);
    auto results = search(index, store, embed_query(emb, "inference latency of transformers"), 3);
    ASSERT_EQ(results.size(), 3u);
    for (std::size_t i = 0; i < results.size(); ++i) {
        EXPECT_EQ(results[i].rank, i + 1);
        EXPECT_EQ(results[i].metadata.doc_id, results[i].doc_id);
        EXPECT_FALSE(results[i].metadata.title.empty());
    }
    EXPECT_NE(results[0].metadata.title.find("latency"), std::string::npos);
}

TEST(Search, BackendOpen) {
    testsupport::TempDir dir;
    EXPECT_THROW(SearchBackend::open(dir / "missing"), Error);
    std::istringstream is(testsupport::toy_corpus_jsonl(10));
    HashEmbedder emb(32);
    MetadataStore store(metadata_path_for(dir / "idx").string());
    IngestStats stats;
    ingest_corpus(is, emb, store, stats).save(dir / "idx");
    auto backend = SearchBackend::open(dir / "idx");
    EXPECT_EQ(backend->index.size(), 10u);
    EXPECT_EQ(backend->store->size(), 10u);
}
