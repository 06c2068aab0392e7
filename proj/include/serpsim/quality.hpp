#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "serpsim/corpus.hpp"

namespace serpsim {

/// 2^(j-1) - 1 for grade j: Bad 0, Fair 1, Good 3, Excellent 7, Perfect 15.
double gain(Grade g);

/// Sum over ranks r <= n of gain / log2(1 + r). Unjudged results gain 0.
double dcg(const ResultList& results, const JudgmentSet& judgments, std::size_t n);

/// (a - b) / max(a, b), in [-1, 1]; 0 when both are 0.
double relative_dcg(double dcg1, double dcg2);

struct DcgScore {
  std::map<std::string, double> per_query;
  double mean = 0.0;
  std::size_t n = 0;
};

/// DCG_n over a query set, one list per query.
DcgScore dcg_over(std::span<const ResultList> lists, const JudgmentSet& judgments, std::size_t n);

}  // namespace serpsim
