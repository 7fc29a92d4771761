#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace proseek {

// query id -> doc ids in rank order
using Run = std::map<std::string, std::vector<std::string>>;
// query id -> relevant doc ids
using Qrels = std::map<std::string, std::set<std::string>>;

// Mean over run queries of 1/rank of the first relevant doc within the top k
// (0 when none). Throws Error naming a run query absent from qrels. An empty
// run scores 0.
double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k = 10);

// Lines "query_id doc_id rank score"; docs are ordered by rank per query.
Run parse_run(std::istream& in);
// Lines "query_id doc_id" (or TREC "query_id iter doc_id relevance", kept when relevance > 0).
Qrels parse_qrels(std::istream& in);

}  // namespace proseek
