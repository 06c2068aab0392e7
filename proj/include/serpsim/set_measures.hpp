#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <span>
#include <vector>

#include "serpsim/corpus.hpp"
#include "serpsim/slot.hpp"
#include "serpsim/text.hpp"

namespace serpsim {

struct JaccardScore {
  double value = 1.0;
  std::size_t intersection_size = 0;
  std::size_t union_size = 0;
};

/// Jaccard ratio of two sorted, duplicate-free ranges. Two empty sets score 1.
template <class A, class B>
JaccardScore jaccard_sorted(const A& a, const B& b) {
  std::size_t common = 0;
  auto i = std::begin(a);
  auto j = std::begin(b);
  while (i != std::end(a) && j != std::end(b)) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const auto na = static_cast<std::size_t>(std::distance(std::begin(a), std::end(a)));
  const auto nb = static_cast<std::size_t>(std::distance(std::begin(b), std::end(b)));
  JaccardScore s;
  s.intersection_size = common;
  s.union_size = na + nb - common;
  s.value = s.union_size == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(s.union_size);
  return s;
}

/// Jaccard ratio over arbitrary finite collections; repeated members count once.
template <class A, class B>
JaccardScore jaccard(const A& a, const B& b) {
  using T = std::decay_t<decltype(*std::begin(a))>;
  std::vector<T> sa(std::begin(a), std::end(a));
  std::vector<T> sb(std::begin(b), std::end(b));
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  return jaccard_sorted(sa, sb);
}

inline JaccardScore jaccard(const ShingleSet& a, const ShingleSet& b) {
  return jaccard_sorted(a.codes, b.codes);
}

/// J_url,n over normalized lists: the first n positions of each list, with
/// empty items dropped.
JaccardScore j_url(std::span<const Slot> a, std::span<const Slot> b, std::size_t n);

/// J_url,n on raw URL strings.
JaccardScore j_url(const ResultList& a, const ResultList& b, std::size_t n);

/// Union of the shingle sets of the first n documents. Throws
/// MissingDocument naming the first entry without a body.
ShingleSet top_n_shingles(const ResultList& list, std::size_t n, ShingleParams params = {});

/// J_term,n: Jaccard over the unions of per-document shingle sets of the
/// top-n entries.
JaccardScore j_term(const ResultList& a, const ResultList& b, std::size_t n, ShingleParams params = {});

}  // namespace serpsim
