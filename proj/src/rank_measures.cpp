#include "serpsim/rank_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "serpsim/error.hpp"

namespace serpsim {

std::string_view to_string(WeightKind k) {
  switch (k) {
    case WeightKind::Iota: return "iota";
    case WeightKind::Dcgw: return "dcgw";
    case WeightKind::Custom: return "custom";
  }
  return "?";
}

std::optional<WeightKind> parse_weight_kind(std::string_view name) {
  if (name == "iota") return WeightKind::Iota;
  if (name == "dcgw") return WeightKind::Dcgw;
  return std::nullopt;
}

double weight_iota(int) { return 1.0; }

double weight_dcgw(int rank) {
  return std::log10(1.0 + rank) / std::ldexp(1.0, rank);
}

WeightFn WeightFn::iota() { return {WeightKind::Iota, weight_iota}; }
WeightFn WeightFn::dcgw() { return {WeightKind::Dcgw, weight_dcgw}; }
WeightFn WeightFn::custom(std::function<double(int)> eval) { return {WeightKind::Custom, std::move(eval)}; }

WeightFn WeightFn::of(WeightKind kind) {
  switch (kind) {
    case WeightKind::Iota: return iota();
    case WeightKind::Dcgw: return dcgw();
    case WeightKind::Custom: break;
  }
  throw InvalidSpec("custom weights need an evaluation function");
}

RankExtension extend_ranks(std::span<const Slot> sigma, std::span<const Slot> pi) {
  RankExtension ext;
  auto index = [](std::span<const Slot> list, const char* which) {
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i]) continue;
      if (!ranks.emplace(*list[i], static_cast<int>(i + 1)).second) {
        throw DuplicateElement(fmt::format("element '{}' repeated in {}", *list[i], which));
      }
    }
    return ranks;
  };
  ext.rank_sigma = index(sigma, "sigma");
  ext.rank_pi = index(pi, "pi");

  for (const auto& s : sigma) {
    if (s) ext.items.push_back(*s);
  }
  int next_sigma = static_cast<int>(sigma.size());
  for (const auto& s : pi) {
    if (s && !ext.rank_sigma.contains(*s)) {
      ext.items.push_back(*s);
      ext.rank_sigma.emplace(*s, ++next_sigma);
    }
  }
  int next_pi = static_cast<int>(pi.size());
  for (const auto& s : sigma) {
    if (s && !ext.rank_pi.contains(*s)) ext.rank_pi.emplace(*s, ++next_pi);
  }
  ext.n = ext.items.size();
  ext.positions = static_cast<std::size_t>(std::max(next_sigma, next_pi));
  return ext;
}

RankExtension extend_ranks(std::span<const std::string> sigma, std::span<const std::string> pi) {
  SlotList s(sigma.begin(), sigma.end());
  SlotList p(pi.begin(), pi.end());
  return extend_ranks(s, p);
}

bool is_bijection(const RankExtension& ext) {
  auto onto = [&](const std::map<std::string, int>& ranks) {
    if (ranks.size() != ext.n) return false;
    std::vector<bool> hit(ext.n + 1, false);
    for (const auto& [item, r] : ranks) {
      if (r < 1 || static_cast<std::size_t>(r) > ext.n || hit[static_cast<std::size_t>(r)]) return false;
      hit[static_cast<std::size_t>(r)] = true;
    }
    return true;
  };
  return onto(ext.rank_sigma) && onto(ext.rank_pi);
}

namespace {

// Maximum-weight perfect matching on a dense square matrix (Hungarian
// method with potentials, run on negated profits).
double max_assignment(const std::vector<std::vector<double>>& profit) {
  const std::size_t n = profit.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = -profit[r - 1][c - 1] - u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  double total = 0.0;
  for (std::size_t c = 1; c <= n; ++c) total += profit[match[c] - 1][c - 1];
  return total;
}

}  // namespace

double max_weighted_displacement(std::size_t positions, const WeightFn& w) {
  const auto m = static_cast<int>(positions);
  if (w.kind() == WeightKind::Iota) {
    double d = 0.0;
    for (int i = 1; i <= m; ++i) d += std::abs(i - (m - i + 1));
    return d;
  }
  std::vector<std::vector<double>> profit(positions, std::vector<double>(positions));
  for (int i = 1; i <= m; ++i) {
    const double wi = w(i);
    for (int j = 1; j <= m; ++j) profit[i - 1][j - 1] = wi * std::abs(i - j);
  }
  return max_assignment(profit);
}

namespace {

ListScore finish(double raw, double denominator) {
  ListScore s;
  s.raw = raw;
  s.denominator = denominator;
  if (denominator <= 0.0) {
    s.degenerate = true;
    s.normalized = 1.0;
  } else {
    s.normalized = 1.0 - 2.0 * raw / denominator;
  }
  return s;
}

}  // namespace

ListScore footrule(const RankExtension& ext, const WeightFn& w) {
  double raw = 0.0;
  for (const auto& item : ext.items) {
    const int rs = ext.rank_sigma.at(item);
    const int rp = ext.rank_pi.at(item);
    raw += w(rs) * std::abs(rs - rp);
  }
  return finish(raw, max_weighted_displacement(ext.positions, w));
}

ListScore footrule(std::span<const Slot> sigma, std::span<const Slot> pi, const WeightFn& w) {
  return footrule(extend_ranks(sigma, pi), w);
}

ListScore footrule(std::span<const std::string> sigma, std::span<const std::string> pi, const WeightFn& w) {
  return footrule(extend_ranks(sigma, pi), w);
}

ListScore kendall(const RankExtension& ext, const WeightFn& w) {
  // Relabel by sigma rank so that sigma reads as the identity.
  std::vector<std::pair<int, int>> by_sigma;  // (rank_sigma, rank_pi)
  by_sigma.reserve(ext.items.size());
  for (const auto& item : ext.items) by_sigma.emplace_back(ext.rank_sigma.at(item), ext.rank_pi.at(item));
  std::sort(by_sigma.begin(), by_sigma.end());

  // Each discordant pair costs (w_i + w_j) / 2, so K_w = sum_i w_i d_i / 2 with
  // d_i the integer count of discordant pairs touching i. Summing in sigma
  // order keeps the result bit-identical to the oracle.
  const std::size_t m = by_sigma.size();
  std::vector<std::size_t> discordant(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (by_sigma[i].second > by_sigma[j].second) {
        ++discordant[i];
        ++discordant[j];
      }
    }
  }
  double raw = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double wi = w(by_sigma[i].first);
    raw += wi * static_cast<double>(discordant[i]);
    denominator += wi * static_cast<double>(m - 1);
  }
  raw /= 2.0;
  denominator /= 2.0;
  return finish(raw, denominator);
}

ListScore kendall(std::span<const Slot> sigma, std::span<const Slot> pi, const WeightFn& w) {
  return kendall(extend_ranks(sigma, pi), w);
}

ListScore kendall(std::span<const std::string> sigma, std::span<const std::string> pi, const WeightFn& w) {
  return kendall(extend_ranks(sigma, pi), w);
}

double kendall_oracle(std::span<const int> pi, const WeightFn& w) {
  std::vector<int> a(pi.begin(), pi.end());
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i + 1)) throw NotPermutation("input is not a permutation of 1..N");
  }
  // swaps[v]: adjacent swaps that moved value v
  std::vector<std::size_t> swaps(a.size() + 1, 0);
  for (std::size_t pass = a.size(); pass > 1; --pass) {
    bool swapped = false;
    for (std::size_t k = 0; k + 1 < pass; ++k) {
      if (a[k] > a[k + 1]) {
        ++swaps[static_cast<std::size_t>(a[k])];
        ++swaps[static_cast<std::size_t>(a[k + 1])];
        std::swap(a[k], a[k + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  double cost = 0.0;
  for (std::size_t v = 1; v < swaps.size(); ++v) cost += w(static_cast<int>(v)) * static_cast<double>(swaps[v]);
  cost /= 2.0;
  return cost;
}

}  // namespace serpsim
