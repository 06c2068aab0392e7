#include "serpsim/set_measures.hpp"

#include <string>

#include <fmt/format.h>

#include "serpsim/error.hpp"

namespace serpsim {

SlotList url_slots(const ResultList& list) {
  SlotList out;
  out.reserve(list.entries.size());
  for (const auto& e : list.entries) out.emplace_back(e.url);
  return out;
}

JaccardScore j_url(std::span<const Slot> a, std::span<const Slot> b, std::size_t n) {
  auto ids = [n](std::span<const Slot> list) {
    std::vector<std::string> out;
    for (const auto& s : list.first(std::min(n, list.size()))) {
      if (s) out.push_back(*s);
    }
    return out;
  };
  return jaccard(ids(a), ids(b));
}

JaccardScore j_url(const ResultList& a, const ResultList& b, std::size_t n) {
  return j_url(url_slots(a), url_slots(b), n);
}

ShingleSet top_n_shingles(const ResultList& list, std::size_t n, ShingleParams params) {
  std::vector<ShingleSet> sets;
  for (std::size_t i = 0; i < std::min(n, list.entries.size()); ++i) {
    const auto& e = list.entries[i];
    if (!e.doc) {
      throw MissingDocument(fmt::format("no document for ({}, {})", list.query_id, e.url));
    }
    sets.push_back(shingle(tokenize(e.doc->body), params));
  }
  auto out = shingle_union(sets);
  out.window = params.window;
  out.cap = params.cap;
  return out;
}

JaccardScore j_term(const ResultList& a, const ResultList& b, std::size_t n, ShingleParams params) {
  return jaccard(top_n_shingles(a, n, params), top_n_shingles(b, n, params));
}

}  // namespace serpsim
