#include <algorithm>

#include <fmt/format.h>

#include "serpsim/error.hpp"
#include "serpsim/harness.hpp"

namespace serpsim {

std::string_view to_string(PerturbMode m) {
  return m == PerturbMode::Correlated ? "correlated" : "anticorrelated";
}

std::optional<PerturbMode> parse_perturb_mode(std::string_view name) {
  if (name == "correlated") return PerturbMode::Correlated;
  if (name == "anticorrelated") return PerturbMode::AntiCorrelated;
  return std::nullopt;
}

std::pair<std::vector<std::string>, std::vector<std::string>> perturbed_lists(const PerturbationSpec& spec) {
  const std::size_t len = spec.list_len;
  if (len < 1) throw InvalidSpec("list length must be >= 1");
  if (spec.common_count < 1 || spec.common_count > len) {
    throw InvalidSpec(fmt::format("common count must be in 1..{}", len));
  }
  if (spec.block_position < 1 || spec.common_count + spec.block_position - 1 > len) {
    throw InvalidSpec(fmt::format("a block of {} at position {} does not fit a list of {}", spec.common_count,
                                  spec.block_position, len));
  }
  if (spec.weights == WeightKind::Custom) throw InvalidSpec("sweeps take iota or dcgw weights");

  std::vector<std::string> a, b;
  for (std::size_t i = 1; i <= len; ++i) {
    a.push_back(std::to_string(i));
    b.push_back(std::to_string(len + i));
  }
  const auto first = static_cast<std::ptrdiff_t>(spec.block_position - 1);
  const auto last = first + static_cast<std::ptrdiff_t>(spec.common_count);
  std::copy(a.begin() + first, a.begin() + last, b.begin() + first);
  if (spec.mode == PerturbMode::AntiCorrelated) std::reverse(b.begin() + first, b.begin() + last);
  return {a, b};
}

std::vector<PerturbationSpec> perturbation_sweep(PerturbMode mode, std::span<const WeightKind> weights,
                                                 std::size_t list_len) {
  std::vector<PerturbationSpec> specs;
  for (WeightKind w : weights) {
    for (std::size_t common = 1; common <= list_len; ++common) {
      for (std::size_t pos = 1; pos + common - 1 <= list_len; ++pos) {
        specs.push_back({list_len, mode, common, pos, w});
      }
    }
  }
  return specs;
}

std::vector<PerturbRow> run_perturbation(std::span<const PerturbationSpec> specs) {
  std::vector<PerturbRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    auto [a, b] = perturbed_lists(spec);
    const WeightFn w = WeightFn::of(spec.weights);
    const RankExtension ext = extend_ranks(a, b);
    rows.push_back({spec, footrule(ext, w).normalized, kendall(ext, w).normalized});
  }
  return rows;
}

std::string perturbation_csv(std::span<const PerturbRow> rows) {
  std::string out = "mode,weights,list_len,common_count,block_position,footrule,kendall\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", to_string(r.spec.mode), to_string(r.spec.weights), r.spec.list_len,
                       r.spec.common_count, r.spec.block_position, r.footrule, r.kendall);
  }
  return out;
}

}  // namespace serpsim
