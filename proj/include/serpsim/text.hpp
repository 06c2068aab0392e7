#pragma once

// Content representations: token sequences, w-shingle sets, term histograms
// and the pair of CDFs over a merged lexicographic support.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace serpsim {

struct TermSequence {
  std::vector<std::string> terms;

  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }
  friend bool operator==(const TermSequence&, const TermSequence&) = default;
};

/// Splits UTF-8 text on Unicode whitespace and punctuation and applies
/// simple case folding. Invalid byte sequences act as separators.
TermSequence tokenize(std::string_view text);

using ShingleCode = std::uint64_t;

struct ShingleParams {
  std::size_t window = 10;
  std::size_t cap = 1000;
};

/// Set of distinct shingle codes, kept sorted.
struct ShingleSet {
  std::vector<ShingleCode> codes;
  std::size_t window = 10;
  std::size_t cap = 1000;

  std::size_t size() const { return codes.size(); }
  bool empty() const { return codes.empty(); }
  bool contains(ShingleCode c) const;
};

/// FNV-1a 64 over the terms joined by the 0x1F unit separator.
ShingleCode shingle_code(std::span<const std::string> window);

/// The first `cap` distinct windows of `window` consecutive terms, in
/// document order. A sequence shorter than the window yields one shingle of
/// the whole sequence.
ShingleSet shingle(const TermSequence& seq, ShingleParams params = {});

/// Union of shingle sets; the cap applies per document, not to the union.
ShingleSet shingle_union(std::span<const ShingleSet> sets);

struct TermHistogram {
  std::map<std::string, std::uint64_t, std::less<>> counts;  // lexicographic (byte) order
  std::uint64_t total = 0;

  std::size_t vocabulary_size() const { return counts.size(); }
  bool empty() const { return total == 0; }
  void add(std::string_view term, std::uint64_t n = 1);
  friend bool operator==(const TermHistogram&, const TermHistogram&) = default;
};

TermHistogram term_histogram(std::span<const TermSequence> seqs);
TermHistogram term_histogram(const TermSequence& seq);

struct PairedCdf {
  std::vector<std::string> support;
  std::vector<double> f_sigma;
  std::vector<double> f_pi;
};

/// Throws EmptyHistogram if either histogram is empty.
PairedCdf paired_cdf(const TermHistogram& h1, const TermHistogram& h2);

}  // namespace serpsim
