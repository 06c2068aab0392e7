#pragma once

// Experiment orchestration behind the CLI: per-query comparison reports,
// corpus-wide overlap histograms, perturbation sweeps, DCG joins and the
// synthetic corpus generator.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "serpsim/corpus.hpp"
#include "serpsim/dist_measures.hpp"
#include "serpsim/normalization.hpp"
#include "serpsim/rank_measures.hpp"
#include "serpsim/set_measures.hpp"

namespace serpsim {

// ---------------------------------------------------------------------------
// Pairwise reports

struct CompareConfig {
  std::size_t top_n = 10;
  std::uint64_t seed = 0;
  int resamples = 199;
  DupMode mode = DupMode::Printed;
  std::vector<std::size_t> content_depths = {1, 5, 10};
};

/// A report field that could not be computed, and why.
struct AbsentField {
  std::string field;
  std::string reason;
};

struct MeasureReport {
  std::string query_id;
  std::string market;
  std::string left_engine;
  std::string right_engine;
  std::size_t top_n = 10;
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  JaccardScore j_url_raw;  // exact URL strings, before normalization
  JaccardScore j_url;      // after normalization
  ListScore s_url;         // footrule, iota weights, normalized lists
  ListScore k_url;         // Kendall tau, iota weights, normalized lists

  std::map<std::size_t, std::optional<double>> j_term;
  std::map<std::size_t, std::optional<double>> phi_term;
  /// Distribution suite on the top-n documents of each list.
  std::optional<std::array<DistanceResult, 10>> suite;

  std::size_t omega_left = 0;
  std::size_t omega_right = 0;
  std::size_t shared_before = 0;
  std::size_t shared_after = 0;

  std::optional<double> dcg_left;
  std::optional<double> dcg_right;
  std::optional<double> r_dcg;

  std::vector<AbsentField> absent;
};

MeasureReport compare_lists(const ResultList& left, const ResultList& right, const CompareConfig& cfg,
                            const JudgmentSet* judgments = nullptr);

/// One JSON object per report, no trailing newline.
std::string to_json_line(const MeasureReport& report);

// ---------------------------------------------------------------------------
// Overlap histograms

/// Counts of J_url values in a bin for exactly 0 followed by the ten
/// intervals (0,.1], (.1,.2], ..., (.9,1].
struct OverlapHistogram {
  std::array<std::size_t, 11> counts{};
  std::size_t total = 0;

  static std::size_t bin_of(const JaccardScore& j);
  static std::string label(std::size_t bin);
  void add(const JaccardScore& j);
  /// Queries with J <= 0.3: the zero bin and the first three intervals.
  std::size_t low_overlap() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

struct HistogramReport {
  OverlapHistogram all;
  std::map<std::string, OverlapHistogram> per_market;
};

std::string histogram_csv(const HistogramReport& report);

// ---------------------------------------------------------------------------
// Corpus runs

struct CorpusConfig {
  CompareConfig compare;
  /// Engines to pair; when empty, a query pairs iff it has exactly two
  /// engines, the lexicographically smaller one on the left.
  std::optional<std::pair<std::string, std::string>> engines;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct SnapshotPair {
  std::string query_id;
  std::filesystem::path left;
  std::filesystem::path right;
};

/// Snapshot files live in `dir/snapshots` when that exists, else in `dir`.
std::vector<SnapshotPair> discover_pairs(const std::filesystem::path& dir, const CorpusConfig& cfg,
                                         std::vector<std::string>* warnings = nullptr);

struct CorpusResult {
  HistogramReport histogram;
  std::vector<MeasureReport> reports;  // sorted by query_id
  std::vector<std::string> warnings;
};

/// Throws NoPairs when nothing can be paired.
CorpusResult run_corpus(const std::filesystem::path& dir, const CorpusConfig& cfg);

// ---------------------------------------------------------------------------
// Relevance joins

struct DcgRow {
  std::string query_id;
  double dcg_left = 0.0;
  double dcg_right = 0.0;
  double r_dcg = 0.0;
  double j_url = 0.0;
  double s_url = 0.0;
  std::optional<double> j_term_10;
  std::optional<double> phi_term_10;
};

struct DcgTable {
  std::size_t n = 5;
  std::vector<DcgRow> rows;
  /// r_dcg over queries with J_url,n < 0.2, in 20 bins of width 0.1 over
  /// [-1, 1]; the last bin is closed.
  std::array<std::size_t, 20> low_overlap_r_dcg{};
};

/// Throws NoJudgedQueries when no paired query has a judgment.
DcgTable run_dcg(const std::filesystem::path& dir, const JudgmentSet& judgments, std::size_t n,
                 const CorpusConfig& cfg);

std::string dcg_csv(const DcgTable& table);
std::string dcg_low_overlap_csv(const DcgTable& table);

// ---------------------------------------------------------------------------
// Perturbation sweeps

enum class PerturbMode { Correlated, AntiCorrelated };

std::string_view to_string(PerturbMode m);
std::optional<PerturbMode> parse_perturb_mode(std::string_view name);

struct PerturbationSpec {
  std::size_t list_len = 10;
  PerturbMode mode = PerturbMode::Correlated;
  std::size_t common_count = 1;
  std::size_t block_position = 1;
  WeightKind weights = WeightKind::Iota;
};

/// a = (1..len) and b' = (len+1..2len) with a block of `common_count` items
/// of a copied in at `block_position` (reversed in anti-correlated mode).
/// Throws InvalidSpec.
std::pair<std::vector<std::string>, std::vector<std::string>> perturbed_lists(const PerturbationSpec& spec);

/// Every common count and block position for the given mode and weights.
std::vector<PerturbationSpec> perturbation_sweep(PerturbMode mode, std::span<const WeightKind> weights,
                                                 std::size_t list_len = 10);

struct PerturbRow {
  PerturbationSpec spec;
  double footrule = 0.0;
  double kendall = 0.0;
};

std::vector<PerturbRow> run_perturbation(std::span<const PerturbationSpec> specs);
std::string perturbation_csv(std::span<const PerturbRow> rows);

// ---------------------------------------------------------------------------
// Synthetic corpora

struct OverlapBucket {
  std::size_t common = 0;
  double fraction = 0.0;
};

struct CorpusProfile {
  std::size_t queries = 100;
  std::size_t list_len = 10;
  std::vector<std::string> markets = {"US"};
  std::pair<std::string, std::string> engines = {"alpha", "beta"};
  std::vector<OverlapBucket> overlap = {{0, 1.0}};
  /// Cross-list duplicate pairs planted in each affected query.
  std::size_t duplicate_pairs = 0;
  /// Share of queries that receive duplicate pairs.
  double duplicate_fraction = 0.0;
  std::size_t doc_terms = 200;
  std::size_t doc_vocabulary = 60;
  std::size_t vocabulary = 50000;
  bool judgments = false;
  std::int64_t fetched_at = 1300000000;
};

/// Throws InvalidProfile.
CorpusProfile parse_profile(std::string_view json_text);
void validate(const CorpusProfile& profile);

struct GroundTruth {
  std::string query_id;
  std::string market;
  std::size_t common = 0;
  /// (left rank, right rank) of each planted cross-list duplicate.
  std::vector<std::pair<int, int>> duplicate_pairs;
  JaccardScore planted_j_url;   // exact URL overlap
  JaccardScore expected_j_url;  // once duplicates are bound together
};

/// Writes snapshots/, docs/, ground_truth.jsonl, profile.json and, when
/// asked for, judgments.jsonl under `out_dir`.
std::vector<GroundTruth> generate_corpus(const CorpusProfile& profile, std::uint64_t seed,
                                         const std::filesystem::path& out_dir);

std::vector<GroundTruth> load_ground_truth(const std::filesystem::path& file);

/// Writes `contents` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace serpsim
