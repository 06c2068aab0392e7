// serpsim: command-line front end for the comparison harness.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "serpsim/error.hpp"
#include "serpsim/harness.hpp"
#include "serpsim/sampling.hpp"

namespace fs = std::filesystem;
using namespace serpsim;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, std::string_view contents) {
  if (path.empty()) {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file(path, contents);
  }
}

DupMode dup_mode(const std::string& name) { return *parse_dup_mode(name); }

const std::vector<std::string> kDupModes = {"printed", "shingle", "either"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity measures for ranked search result lists"};
  app.require_subcommand(1);

  // compare
  std::string left, right, out, judgments_path, mode = "printed";
  std::size_t top = 10;
  std::uint64_t seed = 0;
  auto* compare = app.add_subcommand("compare", "Compare two snapshots of one query");
  compare->add_option("--left", left, "Left snapshot")->required();
  compare->add_option("--right", right, "Right snapshot")->required();
  compare->add_option("--top", top, "List depth")->check(CLI::PositiveNumber);
  compare->add_option("--seed", seed, "Seed for permutation tests");
  compare->add_option("--dupmode", mode, "Cross-list duplicate test")->check(CLI::IsMember(kDupModes));
  compare->add_option("--judgments", judgments_path, "Judgments for DCG fields");
  compare->add_option("--out", out, "Output file (default stdout)");

  // corpus
  std::string dir, reports_path;
  unsigned workers = 0;
  auto* corpus = app.add_subcommand("corpus", "Overlap histogram over a snapshot directory");
  corpus->add_option("--dir", dir, "Corpus directory")->required();
  corpus->add_option("--top", top, "List depth")->check(CLI::PositiveNumber);
  corpus->add_option("--seed", seed, "Seed for permutation tests");
  corpus->add_option("--dupmode", mode, "Cross-list duplicate test")->check(CLI::IsMember(kDupModes));
  corpus->add_option("--workers", workers, "Worker threads (0: all cores)");
  corpus->add_option("--out", out, "Histogram CSV (default stdout)");
  corpus->add_option("--reports", reports_path, "Per-query JSON lines (default <out>.reports.jsonl)");

  // perturb
  std::string perturb_mode, weights;
  std::size_t len = 10;
  auto* perturb = app.add_subcommand("perturb", "Rank-measure sweep over block perturbations");
  perturb->add_option("--mode", perturb_mode, "correlated or anticorrelated")
      ->required()
      ->check(CLI::IsMember({"correlated", "anticorrelated"}));
  perturb->add_option("--weights", weights, "iota, dcgw or both")->required()->check(CLI::IsMember({"iota", "dcgw", "both"}));
  perturb->add_option("--len", len, "List length")->check(CLI::PositiveNumber);
  perturb->add_option("--out", out, "Output CSV (default stdout)");

  // dcg
  std::size_t n = 5;
  std::string hist_out;
  auto* dcg_cmd = app.add_subcommand("dcg", "Relative DCG joined with overlap measures");
  dcg_cmd->add_option("--judgments", judgments_path, "Judgments file")->required();
  dcg_cmd->add_option("--dir", dir, "Corpus directory")->required();
  dcg_cmd->add_option("--n", n, "DCG depth")->check(CLI::PositiveNumber);
  dcg_cmd->add_option("--seed", seed, "Seed for permutation tests");
  dcg_cmd->add_option("--out", out, "Output CSV (default stdout)");
  dcg_cmd->add_option("--hist-out", hist_out, "r_dcg histogram for J_url < 0.2");

  // generate
  std::string profile_path;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus with ground truth");
  generate->add_option("--profile", profile_path, "Profile JSON")->required();
  generate->add_option("--seed", seed, "Seed")->required();
  generate->add_option("--out", out, "Output directory")->required();

  // sample
  std::string log_path, market;
  StrataConfig strata;
  auto* sample = app.add_subcommand("sample", "Stratified query sample for one market");
  sample->add_option("--log", log_path, "Query log")->required();
  sample->add_option("--market", market, "Market code")->required();
  sample->add_option("--per-stratum", strata.per_stratum, "Queries per stratum")->required();
  sample->add_option("--seed", strata.seed, "Seed")->required();
  sample->add_option("--hi", strata.hi, "Lower count bound of the highly frequent stratum");
  sample->add_option("--lo", strata.lo, "Lower count bound of the frequent stratum");
  sample->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compare) {
      CompareConfig cfg;
      cfg.top_n = top;
      cfg.seed = seed;
      cfg.mode = dup_mode(mode);
      LoadOptions lo;
      lo.top_n = top;
      const ResultList l = read_snapshot_file(left, lo);
      const ResultList r = read_snapshot_file(right, lo);
      std::optional<JudgmentSet> js;
      if (!judgments_path.empty()) js = read_judgments_file(judgments_path);
      emit(out, to_json_line(compare_lists(l, r, cfg, js ? &*js : nullptr)) + "\n");
    } else if (*corpus) {
      CorpusConfig cfg;
      cfg.compare.top_n = top;
      cfg.compare.seed = seed;
      cfg.compare.mode = dup_mode(mode);
      cfg.workers = workers;
      const CorpusResult res = run_corpus(dir, cfg);
      for (const auto& w : res.warnings) fmt::print(stderr, "warning: {}\n", w);
      emit(out, histogram_csv(res.histogram));
      if (reports_path.empty() && !out.empty()) reports_path = out + ".reports.jsonl";
      if (!reports_path.empty()) {
        std::string lines;
        for (const auto& r : res.reports) lines += to_json_line(r) + "\n";
        write_file(reports_path, lines);
      }
    } else if (*perturb) {
      std::vector<WeightKind> kinds;
      if (weights == "both") kinds = {WeightKind::Iota, WeightKind::Dcgw};
      else kinds = {*parse_weight_kind(weights)};
      const auto specs = perturbation_sweep(*parse_perturb_mode(perturb_mode), kinds, len);
      emit(out, perturbation_csv(run_perturbation(specs)));
    } else if (*dcg_cmd) {
      CorpusConfig cfg;
      cfg.compare.seed = seed;
      const JudgmentSet js = read_judgments_file(judgments_path);
      const DcgTable table = run_dcg(dir, js, n, cfg);
      emit(out, dcg_csv(table));
      if (!hist_out.empty()) write_file(hist_out, dcg_low_overlap_csv(table));
    } else if (*generate) {
      const CorpusProfile profile = parse_profile(read_file(profile_path));
      const auto truth = generate_corpus(profile, seed, out);
      fmt::print(stderr, "wrote {} queries to {}\n", truth.size(), out);
    } else if (*sample) {
      const QueryLog log = load_query_log(read_file(log_path));
      std::string lines;
      for (const auto& q : stratified_sample(log, market, strata)) {
        lines += nlohmann::json{{"id", q.id},
                                {"text", q.text},
                                {"market", q.market},
                                {"stratum", to_string(q.stratum)},
                                {"timestamp", q.timestamp}}
                     .dump() +
                 "\n";
      }
      emit(out, lines);
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kData;
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kData;
  } catch (const nlohmann::json::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kData;
  }
  return 0;
}
