#include "serpsim/quality.hpp"

#include <algorithm>
#include <cmath>

namespace serpsim {

double gain(Grade g) {
  return std::ldexp(1.0, static_cast<int>(g) - 1) - 1.0;
}

double dcg(const ResultList& results, const JudgmentSet& judgments, std::size_t n) {
  double total = 0.0;
  const std::size_t depth = std::min(n, results.entries.size());
  for (std::size_t i = 0; i < depth; ++i) {
    const auto& e = results.entries[i];
    if (auto grade = judgments.find(results.query_id, e.url)) {
      total += gain(*grade) / std::log2(1.0 + static_cast<double>(e.rank));
    }
  }
  return total;
}

double relative_dcg(double dcg1, double dcg2) {
  const double top = std::max(dcg1, dcg2);
  if (top <= 0.0) return 0.0;
  return (dcg1 - dcg2) / top;
}

DcgScore dcg_over(std::span<const ResultList> lists, const JudgmentSet& judgments, std::size_t n) {
  DcgScore score;
  score.n = n;
  for (const auto& list : lists) score.per_query[list.query_id] = dcg(list, judgments, n);
  if (!score.per_query.empty()) {
    double sum = 0.0;
    for (const auto& [q, v] : score.per_query) sum += v;
    score.mean = sum / static_cast<double>(score.per_query.size());
  }
  return score;
}

}  // namespace serpsim
