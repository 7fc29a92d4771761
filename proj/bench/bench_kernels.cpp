// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "proseek/adapters.hpp"
#include "proseek/frames.hpp"
#include "proseek/kernels.hpp"

namespace {

using namespace proseek;

struct Matrix {
    std::size_t dim = 384;
    std::vector<float> data;
    std::vector<std::string> ids;
    std::vector<float> query;
};

Matrix random_matrix(std::size_t rows, std::size_t dim) {
    std::mt19937 rng(7);
    std::normal_distribution<float> nd;
    Matrix m;
    m.dim = dim;
    m.data.resize(rows * dim);
    for (auto& x : m.data) x = nd(rng);
    m.ids.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) m.ids.push_back("doc-" + std::to_string(i));
    m.query.resize(dim);
    for (auto& x : m.query) x = nd(rng);
    return m;
}

std::string random_text(std::mt19937& rng, std::size_t n) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJ.,;0123456789";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s(n, ' ');
    for (auto& c : s) c = alphabet[pick(rng)];
    return s;
}

template <auto Fn>
void BM_TopK(benchmark::State& state) {
    const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 384);
    kernels::TopKInput in{m.data, m.dim, m.ids, m.query};
    for (auto _ : state) benchmark::DoNotOptimize(Fn(in, 10));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_JaccardMany(benchmark::State& state) {
    std::mt19937 rng(11);
    std::vector<BigramSet> sets;
    for (int i = 0; i < state.range(0); ++i) sets.push_back(compute_bigrams({random_text(rng, 2000)}));
    std::vector<const BigramSet*> ptrs;
    for (const auto& s : sets) ptrs.push_back(&s);
    const BigramSet query = compute_bigrams({random_text(rng, 2000)});
    for (auto _ : state) benchmark::DoNotOptimize(Fn(query, ptrs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_EmbedAll(benchmark::State& state) {
    std::mt19937 rng(13);
    std::vector<std::string> texts;
    for (int i = 0; i < state.range(0); ++i) texts.push_back(random_text(rng, 1000));
    HashEmbedder embedder(384);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(embedder, texts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TopK<kernels::serial::top_k_inner_product>)->Name("top_k/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_TopK<kernels::parallel::top_k_inner_product>)->Name("top_k/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(BM_JaccardMany<kernels::serial::jaccard_many>)->Name("jaccard_many/serial")->Arg(180);
BENCHMARK(BM_JaccardMany<kernels::parallel::jaccard_many>)->Name("jaccard_many/parallel")->Arg(180);
BENCHMARK(BM_EmbedAll<kernels::serial::embed_all>)->Name("embed_all/serial")->Arg(1000);
BENCHMARK(BM_EmbedAll<kernels::parallel::embed_all>)->Name("embed_all/parallel")->Arg(1000);

BENCHMARK_MAIN();
