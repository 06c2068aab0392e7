#pragma once

// Weighted Spearman footrule and weighted Kendall tau for partial lists.
//
// Partial lists are first extended to a pair of permutations: elements
// missing from one list are appended after its last position, in the order
// they have in the other list. Weights are evaluated at the rank an element
// holds in the first (reference) list.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serpsim/slot.hpp"

namespace serpsim {

enum class WeightKind { Iota, Dcgw, Custom };

std::string_view to_string(WeightKind k);
std::optional<WeightKind> parse_weight_kind(std::string_view name);

/// iota(i) = 1.
double weight_iota(int rank);
/// dcgw(i) = log10(1 + i) / 2^i.
double weight_dcgw(int rank);

/// Positive weight over 1-based ranks.
class WeightFn {
 public:
  static WeightFn iota();
  static WeightFn dcgw();
  static WeightFn custom(std::function<double(int)> eval);
  static WeightFn of(WeightKind kind);

  WeightKind kind() const { return kind_; }
  double operator()(int rank) const { return eval_(rank); }

 private:
  WeightFn(WeightKind kind, std::function<double(int)> eval) : kind_(kind), eval_(std::move(eval)) {}

  WeightKind kind_;
  std::function<double(int)> eval_;
};

struct RankExtension {
  /// sigma ∪ pi: sigma's elements in order, then pi's complement in order.
  std::vector<std::string> items;
  std::map<std::string, int> rank_sigma;
  std::map<std::string, int> rank_pi;
  /// |sigma ∪ pi|.
  std::size_t n = 0;
  /// Length of the longer extended list, counting empty items. Equals n
  /// when neither input holds an empty item.
  std::size_t positions = 0;
};

/// Throws DuplicateElement if either list repeats an element.
RankExtension extend_ranks(std::span<const Slot> sigma, std::span<const Slot> pi);
RankExtension extend_ranks(std::span<const std::string> sigma, std::span<const std::string> pi);

/// True when both rank maps are bijections onto 1..n.
bool is_bijection(const RankExtension& ext);

struct ListScore {
  double raw = 0.0;         // S_w or K_w
  double normalized = 1.0;  // 1 - 2 raw / denominator
  double denominator = 0.0;
  /// Set when the denominator vanishes (a single shared element); the
  /// normalized score is then 1.
  bool degenerate = false;
};

/// Largest value of sum_i w(i) |i - p(i)| over permutations p of
/// 1..positions. Closed form for constant weights, otherwise solved as a
/// maximum-weight assignment.
double max_weighted_displacement(std::size_t positions, const WeightFn& w);

ListScore footrule(const RankExtension& ext, const WeightFn& w);
ListScore footrule(std::span<const Slot> sigma, std::span<const Slot> pi, const WeightFn& w);
ListScore footrule(std::span<const std::string> sigma, std::span<const std::string> pi, const WeightFn& w);

ListScore kendall(const RankExtension& ext, const WeightFn& w);
ListScore kendall(std::span<const Slot> sigma, std::span<const Slot> pi, const WeightFn& w);
ListScore kendall(std::span<const std::string> sigma, std::span<const std::string> pi, const WeightFn& w);

/// Weighted bubble-sort distance of `pi` (a permutation of 1..N) from the
/// identity: every executed adjacent swap of values i and j costs
/// (w(i) + w(j)) / 2. Throws NotPermutation.
double kendall_oracle(std::span<const int> pi, const WeightFn& w);

}  // namespace serpsim
