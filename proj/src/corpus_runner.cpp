#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <thread>

#include <fmt/format.h>

#include "serpsim/error.hpp"
#include "serpsim/harness.hpp"
#include "serpsim/quality.hpp"

namespace serpsim {

namespace fs = std::filesystem;

namespace {

// Runs fn(i) for i in [0, count) on a pool of threads. The first failure,
// by index, is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

LoadOptions load_options(std::size_t top_n) {
  LoadOptions o;
  o.top_n = std::max<std::size_t>(top_n, 10);
  return o;
}

}  // namespace

std::vector<SnapshotPair> discover_pairs(const fs::path& dir, const CorpusConfig& cfg,
                                         std::vector<std::string>* warnings) {
  auto warn = [warnings](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  if (!fs::is_directory(dir)) throw IoError(fmt::format("{} is not a directory", dir.string()));
  const fs::path root = fs::is_directory(dir / "snapshots") ? dir / "snapshots" : dir;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::map<std::string, fs::path>> by_query;
  for (const auto& file : files) {
    try {
      ResultList header = load_snapshot(read_file(file), LoadOptions{0});
      auto [it, fresh] = by_query[header.query_id].emplace(header.engine, file);
      if (!fresh) warn(fmt::format("{}: second snapshot for ({}, {}), skipped", file.string(), header.query_id, header.engine));
    } catch (const Error& e) {
      warn(fmt::format("{}: not a snapshot ({}), skipped", file.string(), e.what()));
    }
  }

  std::vector<SnapshotPair> pairs;
  for (const auto& [query, engines] : by_query) {
    if (cfg.engines) {
      auto l = engines.find(cfg.engines->first);
      auto r = engines.find(cfg.engines->second);
      if (l == engines.end() || r == engines.end()) {
        warn(fmt::format("query {}: missing engine {} or {}, skipped", query, cfg.engines->first, cfg.engines->second));
        continue;
      }
      pairs.push_back({query, l->second, r->second});
    } else if (engines.size() == 2) {
      pairs.push_back({query, engines.begin()->second, std::next(engines.begin())->second});
    } else {
      warn(fmt::format("query {}: {} engine snapshot(s), need exactly 2, skipped", query, engines.size()));
    }
  }
  return pairs;
}

CorpusResult run_corpus(const fs::path& dir, const CorpusConfig& cfg) {
  CorpusResult result;
  const auto pairs = discover_pairs(dir, cfg, &result.warnings);
  if (pairs.empty()) throw NoPairs(fmt::format("no snapshot pairs under {}", dir.string()));

  result.reports.resize(pairs.size());
  parallel_for(pairs.size(), cfg.workers, [&](std::size_t i) {
    const ResultList left = read_snapshot_file(pairs[i].left, load_options(cfg.compare.top_n));
    const ResultList right = read_snapshot_file(pairs[i].right, load_options(cfg.compare.top_n));
    result.reports[i] = compare_lists(left, right, cfg.compare);
  });

  for (const auto& r : result.reports) {
    result.histogram.all.add(r.j_url);
    result.histogram.per_market[r.market].add(r.j_url);
  }
  return result;
}

DcgTable run_dcg(const fs::path& dir, const JudgmentSet& judgments, std::size_t n, const CorpusConfig& cfg) {
  DcgTable table;
  table.n = n;
  std::vector<SnapshotPair> pairs;
  for (auto& p : discover_pairs(dir, cfg)) {
    if (judgments.covers_query(p.query_id)) pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw NoJudgedQueries(fmt::format("no judged query among the pairs under {}", dir.string()));

  table.rows.resize(pairs.size());
  parallel_for(pairs.size(), cfg.workers, [&](std::size_t i) {
    const ResultList left = read_snapshot_file(pairs[i].left, load_options(n));
    const ResultList right = read_snapshot_file(pairs[i].right, load_options(n));
    CompareConfig cc = cfg.compare;
    cc.top_n = n;
    cc.content_depths.clear();
    // Rank and set measures at depth n; content measures at depth 10.
    ResultList left_n = left, right_n = right;
    if (left_n.entries.size() > n) left_n.entries.resize(n);
    if (right_n.entries.size() > n) right_n.entries.resize(n);
    NormalizeConfig ncfg;
    ncfg.mode = cc.mode;
    ncfg.consensus = {0.05, cc.resamples, cc.seed};
    const NormalizedPair norm = normalize_lists(left_n, right_n, ncfg);

    DcgRow& row = table.rows[i];
    row.query_id = pairs[i].query_id;
    row.dcg_left = dcg(left, judgments, n);
    row.dcg_right = dcg(right, judgments, n);
    row.r_dcg = relative_dcg(row.dcg_left, row.dcg_right);
    row.j_url = j_url(norm.sigma_tilde, norm.pi_tilde, n).value;
    row.s_url = footrule(norm.sigma_tilde, norm.pi_tilde, WeightFn::iota()).normalized;
    try {
      row.j_term_10 = j_term(left, right, 10).value;
      std::vector<TermSequence> ls, rs;
      for (std::size_t k = 0; k < std::min<std::size_t>(10, left.size()); ++k) ls.push_back(tokenize(left.entries[k].doc->body));
      for (std::size_t k = 0; k < std::min<std::size_t>(10, right.size()); ++k) rs.push_back(tokenize(right.entries[k].doc->body));
      row.phi_term_10 = phi(paired_cdf(term_histogram(ls), term_histogram(rs)));
    } catch (const MissingDocument&) {
    } catch (const EmptyHistogram&) {
    }
  });

  for (const auto& row : table.rows) {
    if (row.j_url < 0.2) {
      const auto bin = static_cast<std::size_t>(std::clamp(std::floor((row.r_dcg + 1.0) * 10.0), 0.0, 19.0));
      ++table.low_overlap_r_dcg[bin];
    }
  }
  return table;
}

std::string dcg_csv(const DcgTable& table) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
  std::string out = fmt::format("query_id,dcg_se1,dcg_se2,r_dcg,j_url_{0},s_url_{0},j_term_10,phi_term_10\n", table.n);
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.query_id, r.dcg_left, r.dcg_right, r.r_dcg, r.j_url, r.s_url,
                       opt(r.j_term_10), opt(r.phi_term_10));
  }
  return out;
}

std::string dcg_low_overlap_csv(const DcgTable& table) {
  std::string out = "r_dcg_lower,r_dcg_upper,count\n";
  for (std::size_t b = 0; b < table.low_overlap_r_dcg.size(); ++b) {
    const double lo = -1.0 + static_cast<double>(b) / 10.0;
    out += fmt::format("{:.1f},{:.1f},{}\n", lo, lo + 0.1, table.low_overlap_r_dcg[b]);
  }
  return out;
}

}  // namespace serpsim
