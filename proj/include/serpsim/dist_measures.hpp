#pragma once

// Distribution distances between term histograms, permutation p-values, the
// vocabulary-overlap gate and the consensus duplicate predicate built on top
// of them.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "serpsim/corpus.hpp"
#include "serpsim/text.hpp"

namespace serpsim {

enum class Measure {
  Phi,
  Xi,
  KolmogorovSmirnov,
  KullbackLeibler,
  JensenShannon,
  ChiSquare,
  Hellinger,
  CramerVonMises,
  Euclid,
  Canberra,
};

inline constexpr std::array<Measure, 10> kAllMeasures = {
    Measure::Phi,        Measure::Xi,           Measure::KolmogorovSmirnov, Measure::KullbackLeibler,
    Measure::JensenShannon, Measure::ChiSquare, Measure::Hellinger,         Measure::CramerVonMises,
    Measure::Euclid,     Measure::Canberra,
};

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view name);

struct DistanceResult {
  Measure measure = Measure::Phi;
  double distance = 0.0;
  double p_value = 1.0;
  bool gated = false;
};

struct PermutationConfig {
  int resamples = 199;
  std::uint64_t seed = 0;
};

/// max_i |F - G| / sqrt(min(m, 1 - m)), m = (F + G) / 2; positions with a
/// zero denominator contribute 0.
double phi(const PairedCdf& cdf);

/// The named distance between the normalized histograms, without gating.
/// Throws EmptyHistogram.
double distance(Measure m, const TermHistogram& h1, const TermHistogram& h2);

/// True when the vocabularies' Jaccard ratio is below 0.30.
bool overlap_gate(const TermHistogram& h1, const TermHistogram& h2);

/// Pooled permutation test: (1 + #{d* >= d_obs}) / (1 + resamples). The
/// result does not depend on the argument order.
double p_value(Measure m, const TermHistogram& h1, const TermHistogram& h2, PermutationConfig cfg = {});

/// Gate, then distance and p-value for one measure.
DistanceResult suite_distance(Measure m, const TermHistogram& h1, const TermHistogram& h2,
                              PermutationConfig cfg = {});

/// All ten measures, evaluated on one shared stream of re-splits; entry i
/// equals suite_distance(kAllMeasures[i], ...).
std::array<DistanceResult, 10> suite(const TermHistogram& h1, const TermHistogram& h2, PermutationConfig cfg = {});

struct ConsensusConfig {
  double alpha = 0.05;
  int resamples = 199;
  std::uint64_t seed = 0;
};

struct ConsensusVerdict {
  int votes_duplicate = 0;
  bool is_duplicate = false;
  /// False when a document had no terms; such pairs never count as duplicates.
  bool comparable = true;
  std::vector<DistanceResult> per_measure;
};

/// A measure votes duplicate when it is not gated and fails to reject
/// equality at level alpha (p >= alpha). Duplicate iff more than 4 votes.
ConsensusVerdict consensus_duplicate(const TermHistogram& h1, const TermHistogram& h2, ConsensusConfig cfg = {});
ConsensusVerdict consensus_duplicate(const DocumentText& d1, const DocumentText& d2, ConsensusConfig cfg = {});

}  // namespace serpsim
