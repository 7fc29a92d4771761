#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "proseek/adapters.hpp"
#include "proseek/config.hpp"
#include "proseek/error.hpp"
#include "proseek/mrr.hpp"
#include "proseek/replay.hpp"
#include "proseek/retrieval.hpp"
#include "proseek/service.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

proseek::EngineConfig config_or_default(const std::string& path) {
    if (path.empty()) return proseek::EngineConfig{};
    return proseek::load_config(path);
}

int run_serve(const std::string& config_path) {
    auto config = config_or_default(config_path);
    proseek::Service service(config);
    int port = service.start();
    std::cerr << "listening on http://" << config.host << ":" << port << "\n";
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
    return 0;
}

int run_index_build(const std::string& corpus, const std::string& out, std::size_t dim) {
    std::ifstream in(corpus);
    if (!in) throw proseek::Error("cannot open corpus " + corpus);
    const auto meta = proseek::metadata_path_for(out);
    std::filesystem::remove(meta);
    proseek::MetadataStore store(meta.string());
    proseek::HashEmbedder embedder(dim);
    proseek::IngestStats stats;
    auto index = proseek::ingest_corpus(in, embedder, store, stats);
    index.save(out);
    std::cout << "records " << stats.records_in << "\n"
              << "indexed " << stats.indexed << "\n"
              << "filtered_no_abstract " << stats.filtered_no_abstract << "\n"
              << "rejected_duplicate " << stats.rejected_duplicate << "\n"
              << "malformed " << stats.malformed << "\n";
    return 0;
}

int run_search(const std::string& index_path, const std::string& query, std::size_t k) {
    auto backend = proseek::SearchBackend::open(index_path);
    proseek::HashEmbedder embedder(backend->index.dimension());
    auto q = proseek::embed_query(embedder, query);
    for (const auto& r : proseek::search(backend->index, *backend->store, q, k)) {
        std::cout << r.rank << "\t" << r.doc_id << "\t" << r.score << "\t" << r.metadata.title << "\n";
    }
    return 0;
}

int run_eval_mrr(const std::string& run_path, const std::string& qrels_path, std::size_t k) {
    std::ifstream run_in(run_path);
    if (!run_in) throw proseek::Error("cannot open run " + run_path);
    std::ifstream qrels_in(qrels_path);
    if (!qrels_in) throw proseek::Error("cannot open qrels " + qrels_path);
    auto run = proseek::parse_run(run_in);
    auto qrels = proseek::parse_qrels(qrels_in);
    std::cout.precision(6);
    std::cout << std::fixed << "MRR@" << k << " " << proseek::mrr_at_k(run, qrels, k) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proseek: proactive literature suggestions from on-screen text"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "run the local HTTP service");
    serve->add_option("--config", config_path, "engine config (JSON)");

    std::string trace_path, out_path;
    auto* replay = app.add_subcommand("replay", "replay a frame trace in logical time");
    replay->add_option("--trace", trace_path, "trace (JSON lines)")->required();
    replay->add_option("--config", config_path, "engine config (JSON)");
    replay->add_option("--out", out_path, "report path")->required();

    std::string corpus_path, index_out;
    std::size_t dim = 384;
    auto* index = app.add_subcommand("index", "corpus index tools");
    index->require_subcommand(1);
    auto* build = index->add_subcommand("build", "build an index from a JSONL corpus");
    build->add_option("--corpus", corpus_path, "corpus (JSON lines)")->required();
    build->add_option("--out", index_out, "index path")->required();
    build->add_option("--dim", dim, "embedding dimension")->check(CLI::PositiveNumber);

    std::string index_path, query;
    std::size_t k = 10;
    auto* search = app.add_subcommand("search", "query an index");
    search->add_option("--index", index_path, "index path")->required();
    search->add_option("--query", query, "query text")->required();
    search->add_option("-k", k, "results")->check(CLI::PositiveNumber);

    std::string run_path, qrels_path;
    std::size_t mrr_k = 10;
    auto* eval = app.add_subcommand("eval", "evaluation tools");
    eval->require_subcommand(1);
    auto* mrr = eval->add_subcommand("mrr", "MRR@k of a run against qrels");
    mrr->add_option("--run", run_path, "run file: qid Q0 docid rank")->required();
    mrr->add_option("--qrels", qrels_path, "qrels file")->required();
    mrr->add_option("-k", mrr_k, "cutoff")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) return run_serve(config_path);
        if (*replay) {
            proseek::replay_file(trace_path, config_or_default(config_path), out_path);
            return 0;
        }
        if (*build) return run_index_build(corpus_path, index_out, dim);
        if (*search) return run_search(index_path, query, k);
        if (*mrr) return run_eval_mrr(run_path, qrels_path, mrr_k);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
