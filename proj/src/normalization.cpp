#include "serpsim/normalization.hpp"

#include <algorithm>
#include <set>

#include "serpsim/set_measures.hpp"

namespace serpsim {

std::string_view to_string(DupMode m) {
  switch (m) {
    case DupMode::Printed: return "printed";
    case DupMode::ShingleOnly: return "shingle";
    case DupMode::ShingleOrConsensus: return "either";
  }
  return "?";
}

std::optional<DupMode> parse_dup_mode(std::string_view name) {
  for (DupMode m : {DupMode::Printed, DupMode::ShingleOnly, DupMode::ShingleOrConsensus}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<ListItem> list_items(const ResultList& list) {
  std::vector<ListItem> out;
  out.reserve(list.entries.size());
  for (const auto& e : list.entries) out.push_back({e.url, e.doc});
  return out;
}

namespace {

std::size_t count_empty(const SlotList& l) {
  return static_cast<std::size_t>(std::count(l.begin(), l.end(), std::nullopt));
}

struct Features {
  bool has_doc = false;
  ShingleSet shingles;
  TermHistogram histogram;
};

std::vector<Features> features(std::span<const ListItem> items, const ShingleParams& params) {
  std::vector<Features> out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].id || !items[i].doc) continue;
    TermSequence terms = tokenize(items[i].doc->body);
    out[i].has_doc = true;
    out[i].shingles = shingle(terms, params);
    out[i].histogram = term_histogram(terms);
  }
  return out;
}

// First name in `order` that belongs to `candidates`.
Slot first_in(const SlotList& order, const std::set<std::string>& candidates) {
  for (const auto& s : order) {
    if (s && candidates.contains(*s)) return s;
  }
  return std::nullopt;
}

SlotList suppress_repeats(const SlotList& binding) {
  SlotList out = binding;
  std::set<std::string> seen;
  for (auto& s : out) {
    if (s && !seen.insert(*s).second) s.reset();
  }
  return out;
}

}  // namespace

std::size_t NormalizedPair::omega_sigma() const { return count_empty(sigma_tilde); }
std::size_t NormalizedPair::omega_pi() const { return count_empty(pi_tilde); }

bool duplicate_by_shingles(const DocumentText& d1, const DocumentText& d2, double threshold, ShingleParams params) {
  return jaccard(shingle(tokenize(d1.body), params), shingle(tokenize(d2.body), params)).value >= threshold;
}

NormalizedPair normalize_items(std::span<const ListItem> sigma, std::span<const ListItem> pi,
                               const NormalizeConfig& cfg) {
  const auto fs = features(sigma, cfg.shingles);
  const auto fp = features(pi, cfg.shingles);

  // Without a document on either side, fall back to exact name equality.
  auto shingle_dup = [&](const ListItem& a, const Features& fa, const ListItem& b, const Features& fb) {
    if (!fa.has_doc || !fb.has_doc) return *a.id == *b.id;
    return jaccard(fa.shingles, fb.shingles).value >= cfg.shingle_threshold;
  };
  auto consensus_dup = [&](const ListItem& a, const Features& fa, const ListItem& b, const Features& fb) {
    if (!fa.has_doc || !fb.has_doc) return *a.id == *b.id;
    return consensus_duplicate(fa.histogram, fb.histogram, cfg.consensus).is_duplicate;
  };
  auto cross_dup = [&](const ListItem& a, const Features& fa, const ListItem& b, const Features& fb) {
    switch (cfg.mode) {
      case DupMode::Printed: return consensus_dup(a, fa, b, fb);
      case DupMode::ShingleOnly: return shingle_dup(a, fa, b, fb);
      case DupMode::ShingleOrConsensus: return shingle_dup(a, fa, b, fb) || consensus_dup(a, fa, b, fb);
    }
    return false;
  };

  NormalizedPair out;

  // Sigma: the first item is always its own name; later items are rebound
  // to the earliest name already bound to a shingle duplicate.
  bool first_seen = false;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!sigma[i].id) {
      out.sigma_binding.push_back(std::nullopt);
      continue;
    }
    std::set<std::string> candidates;
    if (first_seen) {
      for (std::size_t j = 0; j < i; ++j) {
        if (out.sigma_binding[j] && shingle_dup(sigma[j], fs[j], sigma[i], fs[i])) {
          candidates.insert(*out.sigma_binding[j]);
        }
      }
    }
    first_seen = true;
    Slot bound = first_in(out.sigma_binding, candidates);
    out.sigma_binding.push_back(bound ? bound : sigma[i].id);
  }

  // Pi: shingle duplicates among earlier pi items, cross-list duplicates
  // anywhere in sigma; names already used by sigma win.
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (!pi[i].id) {
      out.pi_binding.push_back(std::nullopt);
      continue;
    }
    std::set<std::string> candidates;
    for (std::size_t j = 0; j < i; ++j) {
      if (out.pi_binding[j] && shingle_dup(pi[j], fp[j], pi[i], fp[i])) candidates.insert(*out.pi_binding[j]);
    }
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (out.sigma_binding[j] && cross_dup(sigma[j], fs[j], pi[i], fp[i])) {
        candidates.insert(*out.sigma_binding[j]);
      }
    }
    Slot bound = first_in(out.sigma_binding, candidates);
    if (!bound) bound = first_in(out.pi_binding, candidates);
    out.pi_binding.push_back(bound ? bound : pi[i].id);
  }

  out.sigma_tilde = suppress_repeats(out.sigma_binding);
  out.pi_tilde = suppress_repeats(out.pi_binding);
  return out;
}

NormalizedPair normalize_lists(const ResultList& sigma, const ResultList& pi, const NormalizeConfig& cfg) {
  const auto s = list_items(sigma);
  const auto p = list_items(pi);
  return normalize_items(s, p, cfg);
}

std::pair<std::vector<ListItem>, std::vector<ListItem>> carry_documents(const NormalizedPair& pair,
                                                                       std::span<const ListItem> sigma,
                                                                       std::span<const ListItem> pi) {
  auto carry = [](const SlotList& names, std::span<const ListItem> items) {
    std::vector<ListItem> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      out.push_back({names[i], names[i] ? items[i].doc : nullptr});
    }
    return out;
  };
  return {carry(pair.sigma_tilde, sigma), carry(pair.pi_tilde, pi)};
}

std::size_t shared_names(std::span<const Slot> a, std::span<const Slot> b) {
  return j_url(a, b, std::max(a.size(), b.size())).intersection_size;
}

}  // namespace serpsim
