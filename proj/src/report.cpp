#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "serpsim/error.hpp"
#include "serpsim/harness.hpp"
#include "serpsim/quality.hpp"

namespace serpsim {

using nlohmann::json;

namespace {

ResultList truncated(const ResultList& list, std::size_t n) {
  ResultList out = list;
  if (out.entries.size() > n) out.entries.resize(n);
  return out;
}

TermHistogram top_n_histogram(const ResultList& list, std::size_t n) {
  std::vector<TermSequence> seqs;
  for (std::size_t i = 0; i < std::min(n, list.entries.size()); ++i) {
    const auto& e = list.entries[i];
    if (!e.doc) throw MissingDocument(fmt::format("no document for ({}, {})", list.query_id, e.url));
    seqs.push_back(tokenize(e.doc->body));
  }
  return term_histogram(seqs);
}

json score_json(const JaccardScore& j) {
  return {{"value", j.value}, {"intersection", j.intersection_size}, {"union", j.union_size}};
}

json score_json(const ListScore& s) {
  return {{"raw", s.raw}, {"normalized", s.normalized}, {"denominator", s.denominator}, {"degenerate", s.degenerate}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

MeasureReport compare_lists(const ResultList& left_in, const ResultList& right_in, const CompareConfig& cfg,
                            const JudgmentSet* judgments) {
  const ResultList left = truncated(left_in, cfg.top_n);
  const ResultList right = truncated(right_in, cfg.top_n);

  MeasureReport r;
  r.query_id = left.query_id;
  r.market = left.market;
  r.left_engine = left.engine;
  r.right_engine = right.engine;
  r.top_n = cfg.top_n;
  r.left_size = left.size();
  r.right_size = right.size();

  NormalizeConfig ncfg;
  ncfg.mode = cfg.mode;
  ncfg.consensus.seed = cfg.seed;
  ncfg.consensus.resamples = cfg.resamples;
  const NormalizedPair norm = normalize_lists(left, right, ncfg);

  const SlotList raw_left = url_slots(left);
  const SlotList raw_right = url_slots(right);
  r.j_url_raw = j_url(raw_left, raw_right, cfg.top_n);
  r.j_url = j_url(norm.sigma_tilde, norm.pi_tilde, cfg.top_n);
  r.s_url = footrule(norm.sigma_tilde, norm.pi_tilde, WeightFn::iota());
  r.k_url = kendall(norm.sigma_tilde, norm.pi_tilde, WeightFn::iota());
  r.omega_left = norm.omega_sigma();
  r.omega_right = norm.omega_pi();
  r.shared_before = r.j_url_raw.intersection_size;
  r.shared_after = r.j_url.intersection_size;

  for (std::size_t n : cfg.content_depths) {
    r.j_term[n] = std::nullopt;
    r.phi_term[n] = std::nullopt;
    try {
      r.j_term[n] = j_term(left, right, n).value;
    } catch (const MissingDocument& e) {
      r.absent.push_back({fmt::format("j_term_{}", n), fmt::format("MissingDocument: {}", e.what())});
    }
    try {
      r.phi_term[n] = phi(paired_cdf(top_n_histogram(left, n), top_n_histogram(right, n)));
    } catch (const MissingDocument& e) {
      r.absent.push_back({fmt::format("phi_term_{}", n), fmt::format("MissingDocument: {}", e.what())});
    } catch (const EmptyHistogram& e) {
      r.absent.push_back({fmt::format("phi_term_{}", n), fmt::format("EmptyHistogram: {}", e.what())});
    }
  }

  try {
    r.suite = suite(top_n_histogram(left, cfg.top_n), top_n_histogram(right, cfg.top_n),
                    {cfg.resamples, cfg.seed});
  } catch (const MissingDocument& e) {
    r.absent.push_back({"suite", fmt::format("MissingDocument: {}", e.what())});
  } catch (const EmptyHistogram& e) {
    r.absent.push_back({"suite", fmt::format("EmptyHistogram: {}", e.what())});
  }

  if (judgments) {
    r.dcg_left = dcg(left, *judgments, cfg.top_n);
    r.dcg_right = dcg(right, *judgments, cfg.top_n);
    r.r_dcg = relative_dcg(*r.dcg_left, *r.dcg_right);
  } else {
    r.absent.push_back({"dcg", "NoJudgments"});
  }
  return r;
}

std::string to_json_line(const MeasureReport& r) {
  json j;
  j["query_id"] = r.query_id;
  j["market"] = r.market;
  j["engines"] = {r.left_engine, r.right_engine};
  j["top_n"] = r.top_n;
  j["sizes"] = {r.left_size, r.right_size};
  j["j_url_raw"] = score_json(r.j_url_raw);
  j["j_url"] = score_json(r.j_url);
  j["s_url"] = score_json(r.s_url);
  j["k_url"] = score_json(r.k_url);
  json jt = json::object();
  json pt = json::object();
  for (const auto& [n, v] : r.j_term) jt[std::to_string(n)] = optional_json(v);
  for (const auto& [n, v] : r.phi_term) pt[std::to_string(n)] = optional_json(v);
  j["j_term"] = jt;
  j["phi_term"] = pt;
  if (r.suite) {
    json s = json::array();
    for (const auto& d : *r.suite) {
      s.push_back({{"measure", to_string(d.measure)}, {"distance", d.distance}, {"p_value", d.p_value}, {"gated", d.gated}});
    }
    j["suite"] = s;
  } else {
    j["suite"] = nullptr;
  }
  j["normalization"] = {{"omega_left", r.omega_left},
                        {"omega_right", r.omega_right},
                        {"shared_before", r.shared_before},
                        {"shared_after", r.shared_after}};
  if (r.r_dcg) {
    j["dcg"] = {{"left", *r.dcg_left}, {"right", *r.dcg_right}, {"r_dcg", *r.r_dcg}};
  } else {
    j["dcg"] = nullptr;
  }
  json absent = json::array();
  for (const auto& a : r.absent) absent.push_back({{"field", a.field}, {"reason", a.reason}});
  j["absent"] = absent;
  return j.dump();
}

std::size_t OverlapHistogram::bin_of(const JaccardScore& j) {
  if (j.union_size == 0) return 10;  // two empty lists are identical
  if (j.intersection_size == 0) return 0;
  // ceil(10 * i / u) in integers, so 0.2 lands in (0.1, 0.2].
  return (10 * j.intersection_size + j.union_size - 1) / j.union_size;
}

std::string OverlapHistogram::label(std::size_t bin) {
  if (bin == 0) return "0";
  return fmt::format("({:.1f},{:.1f}]", static_cast<double>(bin - 1) / 10.0, static_cast<double>(bin) / 10.0);
}

void OverlapHistogram::add(const JaccardScore& j) {
  ++counts[bin_of(j)];
  ++total;
}

std::string histogram_csv(const HistogramReport& report) {
  std::string out = "market,bin,count,share\n";
  auto rows = [&out](const std::string& market, const OverlapHistogram& h) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double share = h.total ? static_cast<double>(h.counts[b]) / static_cast<double>(h.total) : 0.0;
      out += fmt::format("{},\"{}\",{},{}\n", market, OverlapHistogram::label(b), h.counts[b], share);
    }
  };
  rows("ALL", report.all);
  for (const auto& [market, h] : report.per_market) rows(market, h);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

}  // namespace serpsim
