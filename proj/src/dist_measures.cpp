#include "serpsim/dist_measures.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "random.hpp"
#include "serpsim/error.hpp"
#include "serpsim/set_measures.hpp"

namespace serpsim {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Phi: return "phi";
    case Measure::Xi: return "xi";
    case Measure::KolmogorovSmirnov: return "kolmogorov_smirnov";
    case Measure::KullbackLeibler: return "kullback_leibler";
    case Measure::JensenShannon: return "jensen_shannon";
    case Measure::ChiSquare: return "chi_square";
    case Measure::Hellinger: return "hellinger";
    case Measure::CramerVonMises: return "cramer_von_mises";
    case Measure::Euclid: return "euclid";
    case Measure::Canberra: return "canberra";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

double phi(const PairedCdf& cdf) {
  double best = 0.0;
  for (std::size_t i = 0; i < cdf.support.size(); ++i) {
    const double f = cdf.f_sigma[i];
    const double g = cdf.f_pi[i];
    const double mid = (f + g) / 2.0;
    const double den = std::min(mid, 1.0 - mid);
    if (den <= 0.0) continue;
    best = std::max(best, std::abs(f - g) / std::sqrt(den));
  }
  return best;
}

namespace {

constexpr double kLogFloor = 1e-10;
constexpr std::size_t kMeasures = kAllMeasures.size();

std::size_t index_of(Measure m) { return static_cast<std::size_t>(m); }

// Two histograms' counts over their merged support.
struct Aligned {
  std::vector<std::uint64_t> c1;
  std::vector<std::uint64_t> c2;
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
};

Aligned align(const TermHistogram& h1, const TermHistogram& h2) {
  Aligned out;
  out.t1 = h1.total;
  out.t2 = h2.total;
  auto a = h1.counts.begin();
  auto b = h2.counts.begin();
  while (a != h1.counts.end() || b != h2.counts.end()) {
    if (b == h2.counts.end() || (a != h1.counts.end() && a->first < b->first)) {
      out.c1.push_back((a++)->second);
      out.c2.push_back(0);
    } else if (a == h1.counts.end() || b->first < a->first) {
      out.c1.push_back(0);
      out.c2.push_back((b++)->second);
    } else {
      out.c1.push_back((a++)->second);
      out.c2.push_back((b++)->second);
    }
  }
  return out;
}

// Every measure in one pass over the support. All expressions are
// symmetric in (c1, c2) bit for bit.
std::array<double, kMeasures> all_distances(const std::vector<std::uint64_t>& c1, std::uint64_t t1,
                                            const std::vector<std::uint64_t>& c2, std::uint64_t t2) {
  const double n1 = static_cast<double>(t1);
  const double n2 = static_cast<double>(t2);
  const std::size_t k = c1.size();
  std::uint64_t cum1 = 0;
  std::uint64_t cum2 = 0;
  double phi_max = 0.0, xi_sum = 0.0, ks = 0.0, kl = 0.0, js = 0.0, chi = 0.0, hel = 0.0, cvm = 0.0,
         euc = 0.0, can = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double p = static_cast<double>(c1[i]) / n1;
    const double q = static_cast<double>(c2[i]) / n2;
    cum1 += c1[i];
    cum2 += c2[i];
    const double f = static_cast<double>(cum1) / n1;
    const double g = static_cast<double>(cum2) / n2;

    const double gap = std::abs(f - g);
    const double mid = (f + g) / 2.0;
    const double den = std::min(mid, 1.0 - mid);
    if (den > 0.0) {
      phi_max = std::max(phi_max, gap / std::sqrt(den));
      xi_sum += gap * gap / den;
    }
    ks = std::max(ks, gap);
    cvm += gap * gap;

    const double diff = p - q;
    const double sum = p + q;
    kl += diff * (std::log(std::max(p, kLogFloor)) - std::log(std::max(q, kLogFloor)));
    if (sum > 0.0) {
      const double m = sum / 2.0;
      const double tp = p > 0.0 ? p * std::log(p / m) : 0.0;
      const double tq = q > 0.0 ? q * std::log(q / m) : 0.0;
      js += tp + tq;
      chi += diff * diff / sum;
      can += std::abs(diff) / sum;
    }
    const double root = std::sqrt(p) - std::sqrt(q);
    hel += root * root;
    euc += diff * diff;
  }
  const double support = k == 0 ? 1.0 : static_cast<double>(k);
  std::array<double, kMeasures> d{};
  d[index_of(Measure::Phi)] = phi_max;
  d[index_of(Measure::Xi)] = std::sqrt(xi_sum / support);
  d[index_of(Measure::KolmogorovSmirnov)] = ks;
  d[index_of(Measure::KullbackLeibler)] = std::max(0.0, kl);
  d[index_of(Measure::JensenShannon)] = std::max(0.0, js / 2.0);
  d[index_of(Measure::ChiSquare)] = chi;
  d[index_of(Measure::Hellinger)] = std::sqrt(hel / 2.0);
  d[index_of(Measure::CramerVonMises)] = cvm / support;
  d[index_of(Measure::Euclid)] = std::sqrt(euc);
  d[index_of(Measure::Canberra)] = can;
  return d;
}

void require_nonempty(const TermHistogram& h1, const TermHistogram& h2) {
  if (h1.empty() || h2.empty()) throw EmptyHistogram("distance needs two non-empty histograms");
}

bool canonical_less(const TermHistogram& a, const TermHistogram& b) {
  return std::tie(a.total, a.counts) < std::tie(b.total, b.counts);
}

std::uint64_t fingerprint(const TermHistogram& a, const TermHistogram& b) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  for (const TermHistogram* hist : {&a, &b}) {
    for (const auto& [term, count] : hist->counts) {
      for (unsigned char c : term) {
        h ^= c;
        h *= 1099511628211ull;
      }
      mix(count);
    }
    mix(~std::uint64_t{0});
  }
  return h;
}

struct Observed {
  std::array<double, kMeasures> distance{};
  std::array<double, kMeasures> p{};
};

// Distances and permutation p-values for all measures. Inputs are put in a
// canonical order first so that the result is symmetric.
Observed observe(const TermHistogram& x, const TermHistogram& y, PermutationConfig cfg) {
  const bool swap = canonical_less(y, x);
  const TermHistogram& h1 = swap ? y : x;
  const TermHistogram& h2 = swap ? x : y;
  const Aligned al = align(h1, h2);

  Observed obs;
  obs.distance = all_distances(al.c1, al.t1, al.c2, al.t2);
  obs.p.fill(1.0);

  std::array<bool, kMeasures> open{};
  bool any_open = false;
  for (std::size_t m = 0; m < kMeasures; ++m) {
    // d_obs = 0 is matched by every re-split, so p is exactly 1.
    open[m] = obs.distance[m] > 0.0;
    any_open = any_open || open[m];
  }
  if (!any_open || cfg.resamples <= 0) return obs;

  const std::size_t k = al.c1.size();
  std::vector<std::uint32_t> pool;
  pool.reserve(al.t1 + al.t2);
  std::vector<std::uint64_t> pooled(k);
  for (std::size_t i = 0; i < k; ++i) {
    pooled[i] = al.c1[i] + al.c2[i];
    pool.insert(pool.end(), pooled[i], static_cast<std::uint32_t>(i));
  }

  // Draw the smaller side; the other side is the remainder of the pool.
  const bool first_small = al.t1 <= al.t2;
  const std::uint64_t draw = first_small ? al.t1 : al.t2;
  detail::Rng rng(detail::mix_seed(cfg.seed, fingerprint(h1, h2)));
  std::array<int, kMeasures> at_least{};
  std::vector<std::uint64_t> drawn(k), rest(k);
  for (int r = 0; r < cfg.resamples; ++r) {
    rng.partial_shuffle(pool, draw);
    std::fill(drawn.begin(), drawn.end(), 0);
    for (std::uint64_t i = 0; i < draw; ++i) ++drawn[pool[i]];
    for (std::size_t i = 0; i < k; ++i) rest[i] = pooled[i] - drawn[i];
    const auto d = first_small ? all_distances(drawn, al.t1, rest, al.t2) : all_distances(rest, al.t1, drawn, al.t2);
    for (std::size_t m = 0; m < kMeasures; ++m) {
      if (open[m] && d[m] >= obs.distance[m] - 1e-12 * std::max(1.0, obs.distance[m])) ++at_least[m];
    }
  }
  for (std::size_t m = 0; m < kMeasures; ++m) {
    if (open[m]) obs.p[m] = (1.0 + at_least[m]) / (1.0 + cfg.resamples);
  }
  return obs;
}

}  // namespace

double distance(Measure m, const TermHistogram& h1, const TermHistogram& h2) {
  require_nonempty(h1, h2);
  const bool swap = canonical_less(h2, h1);
  const Aligned al = swap ? align(h2, h1) : align(h1, h2);
  return all_distances(al.c1, al.t1, al.c2, al.t2)[index_of(m)];
}

bool overlap_gate(const TermHistogram& h1, const TermHistogram& h2) {
  auto keys = [](const TermHistogram& h) {
    std::vector<std::string_view> out;
    out.reserve(h.counts.size());
    for (const auto& [term, count] : h.counts) out.push_back(term);
    return out;
  };
  const JaccardScore j = jaccard_sorted(keys(h1), keys(h2));
  // Jaccard >= 0.30 passes; compared in integers so 3/10 sits on the passing side.
  return 10 * j.intersection_size < 3 * j.union_size;
}

double p_value(Measure m, const TermHistogram& h1, const TermHistogram& h2, PermutationConfig cfg) {
  require_nonempty(h1, h2);
  return observe(h1, h2, cfg).p[index_of(m)];
}

std::array<DistanceResult, 10> suite(const TermHistogram& h1, const TermHistogram& h2, PermutationConfig cfg) {
  require_nonempty(h1, h2);
  std::array<DistanceResult, 10> out;
  if (overlap_gate(h1, h2)) {
    for (std::size_t i = 0; i < kMeasures; ++i) out[i] = {kAllMeasures[i], 1.0, 1.0, true};
    return out;
  }
  const Observed obs = observe(h1, h2, cfg);
  for (std::size_t i = 0; i < kMeasures; ++i) out[i] = {kAllMeasures[i], obs.distance[i], obs.p[i], false};
  return out;
}

DistanceResult suite_distance(Measure m, const TermHistogram& h1, const TermHistogram& h2, PermutationConfig cfg) {
  return suite(h1, h2, cfg)[index_of(m)];
}

ConsensusVerdict consensus_duplicate(const TermHistogram& h1, const TermHistogram& h2, ConsensusConfig cfg) {
  ConsensusVerdict v;
  if (h1.empty() || h2.empty()) {
    v.comparable = false;
    return v;
  }
  const auto results = suite(h1, h2, {cfg.resamples, cfg.seed});
  v.per_measure.assign(results.begin(), results.end());
  for (const auto& r : results) {
    if (!r.gated && r.p_value >= cfg.alpha) ++v.votes_duplicate;
  }
  v.is_duplicate = v.votes_duplicate > 4;
  return v;
}

ConsensusVerdict consensus_duplicate(const DocumentText& d1, const DocumentText& d2, ConsensusConfig cfg) {
  return consensus_duplicate(term_histogram(tokenize(d1.body)), term_histogram(tokenize(d2.body)), cfg);
}

}  // namespace serpsim
