#include "proseek/mrr.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "proseek/error.hpp"

namespace proseek {

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k) {
    if (run.empty()) return 0.0;
    double total = 0.0;
    for (const auto& [query, ranked] : run) {
        auto it = qrels.find(query);
        if (it == qrels.end()) throw Error("query '" + query + "' has no qrels");
        const std::size_t limit = std::min(k, ranked.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (it->second.contains(ranked[i])) {
                total += 1.0 / static_cast<double>(i + 1);
                break;
            }
        }
    }
    return total / static_cast<double>(run.size());
}

namespace {

std::vector<std::string> fields(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string f;
    while (ss >> f) out.push_back(f);
    return out;
}

}  // namespace

Run parse_run(std::istream& in) {
    std::map<std::string, std::vector<std::tuple<long, double, std::string>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto f = fields(line);
        if (f.empty()) continue;
        if (f.size() != 4) throw FormatError("run line needs 'query_id doc_id rank score'", line_no);
        try {
            rows[f[0]].emplace_back(std::stol(f[2]), std::stod(f[3]), f[1]);
        } catch (const std::logic_error&) {
            throw FormatError("bad rank or score", line_no);
        }
    }
    Run run;
    for (auto& [query, docs] : rows) {
        std::stable_sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
            if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
            return std::get<1>(a) > std::get<1>(b);
        });
        auto& ranked = run[query];
        for (auto& d : docs) ranked.push_back(std::move(std::get<2>(d)));
    }
    return run;
}

Qrels parse_qrels(std::istream& in) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto f = fields(line);
        if (f.empty()) continue;
        if (f.size() == 2) {
            qrels[f[0]].insert(f[1]);
        } else if (f.size() == 4) {
            long rel = 0;
            try {
                rel = std::stol(f[3]);
            } catch (const std::logic_error&) {
                throw FormatError("bad relevance", line_no);
            }
            auto& docs = qrels[f[0]];
            if (rel > 0) docs.insert(f[2]);
        } else {
            throw FormatError("qrels line needs 'query_id doc_id'", line_no);
        }
    }
    return qrels;
}

}  // namespace proseek
