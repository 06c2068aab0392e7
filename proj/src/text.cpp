#include "serpsim/text.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "serpsim/error.hpp"

namespace serpsim {

namespace {

bool is_separator(UChar32 c) {
  return c < 0 || u_isUWhiteSpace(c) || u_ispunct(c) || u_iscntrl(c);
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

TermSequence tokenize(std::string_view text) {
  TermSequence seq;
  std::string current;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (is_separator(c)) {
      if (!current.empty()) seq.terms.push_back(std::exchange(current, {}));
      continue;
    }
    append_utf8(current, u_foldCase(c, U_FOLD_CASE_DEFAULT));
  }
  if (!current.empty()) seq.terms.push_back(std::move(current));
  return seq;
}

bool ShingleSet::contains(ShingleCode c) const {
  return std::binary_search(codes.begin(), codes.end(), c);
}

ShingleCode shingle_code(std::span<const std::string> window) {
  constexpr std::uint64_t kOffset = 14695981039346656037ull;
  constexpr std::uint64_t kPrime = 1099511628211ull;
  std::uint64_t h = kOffset;
  auto mix = [&h](unsigned char b) {
    h ^= b;
    h *= kPrime;
  };
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (i > 0) mix(0x1F);
    for (unsigned char b : window[i]) mix(b);
  }
  return h;
}

ShingleSet shingle(const TermSequence& seq, ShingleParams params) {
  ShingleSet out;
  out.window = params.window;
  out.cap = params.cap;
  if (params.window == 0) params.window = 1;
  if (seq.empty() || params.cap == 0) return out;

  std::span<const std::string> terms(seq.terms);
  if (terms.size() < params.window) {
    out.codes.push_back(shingle_code(terms));
    return out;
  }
  std::unordered_set<ShingleCode> seen;
  for (std::size_t start = 0; start + params.window <= terms.size(); ++start) {
    if (seen.insert(shingle_code(terms.subspan(start, params.window))).second &&
        seen.size() == params.cap) {
      break;
    }
  }
  out.codes.assign(seen.begin(), seen.end());
  std::sort(out.codes.begin(), out.codes.end());
  return out;
}

ShingleSet shingle_union(std::span<const ShingleSet> sets) {
  ShingleSet out;
  if (!sets.empty()) {
    out.window = sets.front().window;
    out.cap = sets.front().cap;
  }
  for (const auto& s : sets) out.codes.insert(out.codes.end(), s.codes.begin(), s.codes.end());
  std::sort(out.codes.begin(), out.codes.end());
  out.codes.erase(std::unique(out.codes.begin(), out.codes.end()), out.codes.end());
  return out;
}

void TermHistogram::add(std::string_view term, std::uint64_t n) {
  if (n == 0) return;
  auto it = counts.find(term);
  if (it == counts.end()) {
    counts.emplace(std::string(term), n);
  } else {
    it->second += n;
  }
  total += n;
}

TermHistogram term_histogram(std::span<const TermSequence> seqs) {
  TermHistogram h;
  for (const auto& seq : seqs) {
    for (const auto& t : seq.terms) h.add(t);
  }
  return h;
}

TermHistogram term_histogram(const TermSequence& seq) {
  return term_histogram(std::span<const TermSequence>(&seq, 1));
}

PairedCdf paired_cdf(const TermHistogram& h1, const TermHistogram& h2) {
  if (h1.empty() || h2.empty()) throw EmptyHistogram("paired_cdf needs two non-empty histograms");
  PairedCdf cdf;
  auto a = h1.counts.begin();
  auto b = h2.counts.begin();
  std::uint64_t cum1 = 0;
  std::uint64_t cum2 = 0;
  const double t1 = static_cast<double>(h1.total);
  const double t2 = static_cast<double>(h2.total);
  // Natural merge of the two sorted vocabularies.
  while (a != h1.counts.end() || b != h2.counts.end()) {
    const std::string* term;
    if (b == h2.counts.end() || (a != h1.counts.end() && a->first < b->first)) {
      term = &a->first;
      cum1 += (a++)->second;
    } else if (a == h1.counts.end() || b->first < a->first) {
      term = &b->first;
      cum2 += (b++)->second;
    } else {
      term = &a->first;
      cum1 += (a++)->second;
      cum2 += (b++)->second;
    }
    cdf.support.push_back(*term);
    cdf.f_sigma.push_back(static_cast<double>(cum1) / t1);
    cdf.f_pi.push_back(static_cast<double>(cum2) / t2);
  }
  return cdf;
}

}  // namespace serpsim
