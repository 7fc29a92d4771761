#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "proseek/adapters.hpp"
#include "proseek/error.hpp"
#include "proseek/frames.hpp"
#include "proseek/kernels.hpp"
#include "proseek/textdyn.hpp"

using namespace proseek;

namespace {

struct Fixture {
    std::size_t dim = 16;
    std::vector<float> matrix;
    std::vector<std::string> ids;
    std::vector<float> query;
};

// Coarse values make exact score ties common.
Fixture make_fixture(std::size_t rows, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> v(-2, 2);
    Fixture f;
    f.matrix.resize(rows * f.dim);
    for (auto& x : f.matrix) x = static_cast<float>(v(rng)) * 0.25f;
    std::vector<std::size_t> perm(rows);
    for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < rows; ++i) f.ids.push_back("id" + std::to_string(perm[i]));
    f.query.resize(f.dim);
    for (auto& x : f.query) x = static_cast<float>(v(rng)) * 0.5f;
    return f;
}

std::vector<std::pair<std::string, double>> brute_force(const Fixture& f, std::size_t k) {
    std::vector<std::pair<std::string, double>> all;
    const std::size_t rows = f.ids.size();
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t d = 0; d < f.dim; ++d) s += static_cast<double>(f.matrix[r * f.dim + d]) * f.query[d];
        all.emplace_back(f.ids[r], s);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

}  // namespace

TEST(Kernels, TopKMatchesBruteForceWithTies) {
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        auto f = make_fixture(300, seed);
        kernels::TopKInput in{f.matrix, f.dim, f.ids, f.query};
        for (std::size_t k : {0, 1, 5, 17, 300, 500}) {
            auto expect = brute_force(f, k);
            auto s = kernels::serial::top_k_inner_product(in, k);
            auto p = kernels::parallel::top_k_inner_product(in, k);
            ASSERT_EQ(s.size(), expect.size());
            ASSERT_EQ(p.size(), expect.size());
            for (std::size_t i = 0; i < expect.size(); ++i) {
                EXPECT_EQ(f.ids[s[i].row], expect[i].first);
                EXPECT_EQ(s[i].score, expect[i].second);
                EXPECT_EQ(p[i].row, s[i].row);
                EXPECT_EQ(p[i].score, s[i].score);
            }
        }
    }
}

TEST(Kernels, JaccardManyParity) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> c('a', 'h');
    std::vector<BigramSet> sets;
    for (int i = 0; i < 200; ++i) {
        std::string s;
        for (int j = 0; j < 30; ++j) s += static_cast<char>(c(rng));
        sets.push_back(make_frame(s, 0).bigrams);
    }
    std::vector<const BigramSet*> ptrs;
    for (const auto& s : sets) ptrs.push_back(&s);
    auto serial = kernels::serial::jaccard_many(sets[0], ptrs);
    auto parallel = kernels::parallel::jaccard_many(sets[0], ptrs);
    ASSERT_EQ(serial.size(), sets.size());
    EXPECT_EQ(serial, parallel);
    for (std::size_t i = 0; i < sets.size(); ++i) EXPECT_EQ(serial[i], jaccard(sets[0], sets[i]).value);
}

TEST(Kernels, EmbedAllParity) {
    HashEmbedder emb(64);
    std::vector<std::string> texts;
    for (int i = 0; i < 100; ++i) texts.push_back("text number " + std::to_string(i) + " about things");
    auto s = kernels::serial::embed_all(emb, texts);
    auto p = kernels::parallel::embed_all(emb, texts);
    EXPECT_EQ(s, p);
    EXPECT_EQ(s[3], emb.embed(texts[3]));
}

TEST(Kernels, EmbedAllRethrows) {
    HashEmbedder emb(8);
    std::vector<std::string> texts = {"ok", "", "fine"};
    EXPECT_THROW(kernels::parallel::embed_all(emb, texts), ContractViolation);
    EXPECT_THROW(kernels::serial::embed_all(emb, texts), ContractViolation);
}

TEST(Kernels, IntersectionAndDot) {
    BigramSet a = {1, 3, 5, 7}, b = {3, 4, 5, 8};
    EXPECT_EQ(kernels::intersection_size(a, b), 2u);
    std::vector<float> x = {1, 2, 3}, y = {4, 5, 6};
    EXPECT_DOUBLE_EQ(kernels::dot(x, y), 32.0);
}
