#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "serpsim/dist_measures.hpp"
#include "serpsim/error.hpp"

using namespace serpsim;

namespace {

TermHistogram hist(std::initializer_list<std::pair<const char*, std::uint64_t>> items) {
  TermHistogram h;
  for (auto [t, n] : items) h.add(t, n);
  return h;
}

TermHistogram from_text(const std::string& text) { return term_histogram(tokenize(text)); }

// Textbook forms, evaluated directly on the normalized histograms.
double ref_distance(Measure m, const TermHistogram& h1, const TermHistogram& h2) {
  std::set<std::string> support;
  for (const auto& [t, c] : h1.counts) support.insert(t);
  for (const auto& [t, c] : h2.counts) support.insert(t);
  std::vector<double> p, q, F, G;
  double f = 0, g = 0;
  for (const auto& t : support) {
    auto a = h1.counts.find(t), b = h2.counts.find(t);
    p.push_back(a == h1.counts.end() ? 0.0 : double(a->second) / double(h1.total));
    q.push_back(b == h2.counts.end() ? 0.0 : double(b->second) / double(h2.total));
    f += p.back();
    g += q.back();
    F.push_back(f);
    G.push_back(g);
  }
  F.back() = 1.0;
  G.back() = 1.0;
  const double K = double(support.size());
  double acc = 0;
  switch (m) {
    case Measure::Phi:
    case Measure::Xi: {
      double best = 0, sum = 0;
      for (std::size_t i = 0; i < F.size(); ++i) {
        double den = std::min((F[i] + G[i]) / 2, 1 - (F[i] + G[i]) / 2);
        if (den <= 1e-15) continue;
        best = std::max(best, std::abs(F[i] - G[i]) / std::sqrt(den));
        sum += (F[i] - G[i]) * (F[i] - G[i]) / den;
      }
      return m == Measure::Phi ? best : std::sqrt(sum / K);
    }
    case Measure::KolmogorovSmirnov:
      for (std::size_t i = 0; i < F.size(); ++i) acc = std::max(acc, std::abs(F[i] - G[i]));
      return acc;
    case Measure::KullbackLeibler:
      for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * std::log(std::max(p[i], 1e-10) / std::max(q[i], 1e-10));
      return acc;
    case Measure::JensenShannon:
      for (std::size_t i = 0; i < p.size(); ++i) {
        double mm = (p[i] + q[i]) / 2;
        if (p[i] > 0) acc += 0.5 * p[i] * std::log(p[i] / mm);
        if (q[i] > 0) acc += 0.5 * q[i] * std::log(q[i] / mm);
      }
      return acc;
    case Measure::ChiSquare:
      for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]) / (p[i] + q[i]);
      return acc;
    case Measure::Hellinger:
      for (std::size_t i = 0; i < p.size(); ++i) acc += std::pow(std::sqrt(p[i]) - std::sqrt(q[i]), 2);
      return std::sqrt(acc / 2);
    case Measure::CramerVonMises:
      for (std::size_t i = 0; i < F.size(); ++i) acc += (F[i] - G[i]) * (F[i] - G[i]);
      return acc / K;
    case Measure::Euclid:
      for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(acc);
    case Measure::Canberra:
      for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]) / (p[i] + q[i]);
      return acc;
  }
  return -1;
}

TermHistogram random_hist(std::mt19937_64& rng, int vocab, int terms) {
  TermHistogram h;
  for (int i = 0; i < terms; ++i) h.add("t" + std::to_string(rng() % static_cast<unsigned>(vocab)));
  return h;
}

}  // namespace

TEST_CASE("phi on the worked CDFs") {
  PairedCdf c{{"a", "b", "e", "h"}, {0.4, 0.6, 1.0, 1.0}, {0.5, 0.5, 0.75, 1.0}};
  CHECK(phi(c) == doctest::Approx(0.25 / std::sqrt(0.125)).epsilon(1e-12));
  CHECK(phi(c) == doctest::Approx(0.70711).epsilon(1e-4));
  auto h1 = hist({{"a", 2}, {"b", 1}, {"e", 2}});
  auto h2 = hist({{"a", 2}, {"e", 1}, {"h", 1}});
  CHECK(phi(paired_cdf(h1, h2)) == doctest::Approx(0.70710678).epsilon(1e-6));
}

TEST_CASE("phi edge values") {
  PairedCdf same{{"a", "b"}, {0.3, 1.0}, {0.3, 1.0}};
  CHECK(phi(same) == 0.0);
  PairedCdf far{{"a", "b"}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK(phi(far) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("every distance matches its reference form") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    auto h1 = random_hist(rng, 12, 1 + static_cast<int>(rng() % 40));
    auto h2 = random_hist(rng, 12, 1 + static_cast<int>(rng() % 40));
    for (Measure m : kAllMeasures) {
      const double d = distance(m, h1, h2);
      CHECK(d == doctest::Approx(ref_distance(m, h1, h2)).epsilon(1e-9));
      CHECK(d == distance(m, h2, h1));  // symmetric bit for bit
      CHECK(d >= 0.0);
    }
    CHECK(distance(Measure::Phi, h1, h2) <= std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("distance of a histogram to itself is zero") {
  auto h = hist({{"x", 3}, {"y", 1}, {"z", 7}});
  for (Measure m : kAllMeasures) CHECK(distance(m, h, h) == 0.0);
  CHECK_THROWS_AS(distance(Measure::Phi, h, TermHistogram{}), EmptyHistogram);
}

TEST_CASE("measure names round-trip") {
  for (Measure m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
  CHECK_FALSE(parse_measure("manhattan"));
  CHECK(to_string(Measure::KullbackLeibler) == "kullback_leibler");
}

TEST_CASE("overlap gate") {
  auto h = hist({{"a", 1}, {"b", 2}});
  CHECK_FALSE(overlap_gate(h, h));
  CHECK(overlap_gate(hist({{"a", 1}}), hist({{"b", 1}})));
  // 3 shared of 10: exactly 0.3, gate stays off
  auto v1 = hist({{"s1", 1}, {"s2", 1}, {"s3", 1}, {"a1", 1}, {"a2", 1}, {"a3", 1}});
  auto v2 = hist({{"s1", 1}, {"s2", 1}, {"s3", 1}, {"b1", 1}, {"b2", 1}, {"b3", 1}, {"b4", 1}});
  CHECK_FALSE(overlap_gate(v1, v2));
  v2.add("b5");  // 3/11
  CHECK(overlap_gate(v1, v2));
}

TEST_CASE("gated results are distance 1 and p-value 1") {
  auto a = from_text("alpha beta gamma delta");
  auto b = from_text("one two three four");
  for (const auto& r : suite(a, b)) {
    CHECK(r.gated);
    CHECK(r.distance == 1.0);
    CHECK(r.p_value == 1.0);
  }
  auto single = suite_distance(Measure::Hellinger, a, b);
  CHECK(single.gated);
  CHECK(single.measure == Measure::Hellinger);
}

TEST_CASE("identical documents: zero distance and p-value 1") {
  auto h = from_text("the quick brown fox jumps over the lazy dog the end");
  for (const auto& r : suite(h, h)) {
    CHECK_FALSE(r.gated);
    CHECK(r.distance == 0.0);
    CHECK(r.p_value >= 0.95);
  }
  CHECK(p_value(Measure::Phi, h, h) == 1.0);
}

TEST_CASE("large disjoint histograms reject equality") {
  TermHistogram a, b;
  for (int i = 0; i < 30; ++i) {
    a.add("a" + std::to_string(i), 5);
    b.add("b" + std::to_string(i), 5);
  }
  for (Measure m : kAllMeasures) CHECK(p_value(m, a, b, {199, 3}) <= 0.05);
}

TEST_CASE("p-values are deterministic, symmetric and in range") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    auto h1 = random_hist(rng, 8, 20 + static_cast<int>(rng() % 30));
    auto h2 = random_hist(rng, 8, 20 + static_cast<int>(rng() % 30));
    PermutationConfig cfg{99, static_cast<std::uint64_t>(t)};
    auto s = suite(h1, h2, cfg);
    auto r = suite(h2, h1, cfg);
    auto again = suite(h1, h2, cfg);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].measure == kAllMeasures[i]);
      CHECK(s[i].p_value == r[i].p_value);
      CHECK(s[i].p_value == again[i].p_value);
      CHECK(s[i].distance == r[i].distance);
      CHECK(s[i].p_value >= 1.0 / 100.0);
      CHECK(s[i].p_value <= 1.0);
      if (!s[i].gated) CHECK(s[i].p_value == p_value(kAllMeasures[i], h1, h2, cfg));
      auto one = suite_distance(kAllMeasures[i], h1, h2, cfg);
      CHECK(one.p_value == s[i].p_value);
      CHECK(one.gated == s[i].gated);
    }
  }
}

TEST_CASE("p-value granularity follows the resample count") {
  auto a = from_text("a a a b b c d d e");
  auto b = from_text("a b b b c c d e e");
  const double p = p_value(Measure::KolmogorovSmirnov, a, b, {19, 1});
  const double hits = p * 20.0 - 1.0;
  CHECK(hits == doctest::Approx(std::round(hits)));
}

TEST_CASE("consensus on the reversed-letter pair") {
  DocumentText d1 = DocumentText::from_body("u1", "a b c a b c");
  DocumentText d2 = DocumentText::from_body("u2", "c b a c b a");
  auto v = consensus_duplicate(d1, d2);
  CHECK(v.comparable);
  CHECK(v.votes_duplicate == 10);
  CHECK(v.is_duplicate);
  CHECK(v.per_measure.size() == 10);
  for (const auto& r : v.per_measure) CHECK(r.distance == 0.0);
}

TEST_CASE("consensus on identical, unrelated and empty documents") {
  auto same = from_text("one fish two fish red fish blue fish");
  auto v = consensus_duplicate(same, same);
  CHECK(v.votes_duplicate == 10);
  CHECK(v.is_duplicate);

  auto w = consensus_duplicate(from_text("alpha beta gamma"), from_text("delta epsilon zeta"));
  CHECK(w.votes_duplicate == 0);
  CHECK_FALSE(w.is_duplicate);

  auto e = consensus_duplicate(TermHistogram{}, same);
  CHECK_FALSE(e.comparable);
  CHECK_FALSE(e.is_duplicate);
  CHECK(e.votes_duplicate == 0);
}

TEST_CASE("consensus verdict is symmetric and counts votes") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    auto h1 = random_hist(rng, 6, 15 + static_cast<int>(rng() % 20));
    auto h2 = random_hist(rng, 6, 15 + static_cast<int>(rng() % 20));
    ConsensusConfig cfg{0.05, 99, 4};
    auto a = consensus_duplicate(h1, h2, cfg);
    auto b = consensus_duplicate(h2, h1, cfg);
    CHECK(a.votes_duplicate == b.votes_duplicate);
    CHECK(a.is_duplicate == b.is_duplicate);
    int votes = 0;
    for (const auto& r : a.per_measure) votes += (!r.gated && r.p_value >= 0.05);
    CHECK(votes == a.votes_duplicate);
    CHECK(a.is_duplicate == (votes > 4));
  }
}
