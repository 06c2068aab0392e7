#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

using testing::TempDir;

namespace {

const std::string kCli = SERPSIM_CLI;
const std::string kFix = SERPSIM_FIXTURES;

// Runs the binary with stdout and stderr sent to files; returns the exit code.
int run(const std::string& args, const std::filesystem::path& out, const std::filesystem::path& err) {
  const std::string cmd = "'" + kCli + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::string& args) {
  TempDir t;
  const int code = run(args, t.path() / "out", t.path() / "err");
  return {code, slurp(t.path() / "out"), slurp(t.path() / "err")};
}

std::string fx(const std::string& rel) { return "'" + kFix + "/" + rel + "'"; }

const std::string kCompare =
    "compare --left " + fx("corpus/snapshots/otters.north.jsonl") + " --right " + fx("corpus/snapshots/otters.south.jsonl");

}  // namespace

TEST_CASE("compare prints one report") {
  auto r = run(kCompare + " --judgments " + fx("corpus/judgments.jsonl"));
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["query_id"] == "otters");
  CHECK(j["j_url_raw"]["value"] == 0.2);
  CHECK(j["j_url"]["value"] == 0.5);  // the mirrored page joins its original
  CHECK(j["dcg"]["left"] == 18.5);
  CHECK(j["absent"].empty());
}

TEST_CASE("every command reruns byte for byte") {
  TempDir t;
  const auto gen = [&](const char* name) { return "--out '" + (t.path() / name).string() + "'"; };
  const std::vector<std::string> commands = {
      kCompare + " --seed 3",
      kCompare + " --dupmode either --seed 3",
      "corpus --dir " + fx("corpus") + " --workers 3",
      "perturb --mode anticorrelated --weights both",
      "dcg --dir " + fx("corpus") + " --judgments " + fx("corpus/judgments.jsonl") + " --n 3",
      "sample --log " + fx("querylog.jsonl") + " --market US --per-stratum 2 --seed 5",
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    CHECK_MESSAGE(a.code == 0, c);
    CHECK_MESSAGE(!a.out.empty(), c);
    CHECK_MESSAGE(a.out == b.out, c);
  }
  REQUIRE(run("generate --profile " + fx("profile.json") + " --seed 9 " + gen("g1")).code == 0);
  REQUIRE(run("generate --profile " + fx("profile.json") + " --seed 9 " + gen("g2")).code == 0);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(t.path() / "g1")) {
    if (!e.is_regular_file()) continue;
    ++files;
    auto rel = std::filesystem::relative(e.path(), t.path() / "g1");
    CHECK_MESSAGE(slurp(e.path()) == slurp(t.path() / "g2" / rel), rel.string());
  }
  CHECK(files > 10);
  auto c1 = run("corpus --dir '" + (t.path() / "g1").string() + "'");
  auto c2 = run("corpus --dir '" + (t.path() / "g2").string() + "'");
  CHECK(c1.code == 0);
  CHECK(c1.out == c2.out);
}

TEST_CASE("files written with --out match stdout") {
  TempDir t;
  auto out = t.path() / "h.csv";
  auto r = run("corpus --dir " + fx("corpus") + " --out '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out) == run("corpus --dir " + fx("corpus")).out);
  // per-query reports land next to it
  auto reports = slurp(t.path() / "h.csv.reports.jsonl");
  CHECK(std::count(reports.begin(), reports.end(), '\n') == 2);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run(kCompare + " --dupmode sometimes").code == 1);
  CHECK(run("perturb --mode sideways --weights iota").code == 1);
  CHECK(run("compare --left " + fx("broken.jsonl")).code == 1);
  CHECK(run("generate --seed 1 --out /tmp/x").code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("data errors exit with 2 and say why") {
  auto broken = run("compare --left " + fx("broken.jsonl") + " --right " + fx("corpus/snapshots/otters.south.jsonl"));
  CHECK(broken.code == 2);
  CHECK(broken.err.find("broken.jsonl") != std::string::npos);
  CHECK(run("corpus --dir " + fx("no-such-dir")).code == 2);
  CHECK(run("corpus --dir " + fx("corpus/docs")).code == 2);  // nothing pairs
  CHECK(run("sample --log " + fx("querylog.jsonl") + " --market FR --per-stratum 2 --seed 1").code == 2);
  CHECK(run("sample --log " + fx("querylog.jsonl") + " --market US --per-stratum 2 --seed 1 --hi 5 --lo 10").code == 2);
  CHECK(run("generate --profile " + fx("querylog.jsonl") + " --seed 1 --out /tmp/never").code == 2);
  CHECK(run("dcg --dir " + fx("corpus") + " --judgments " + fx("broken.jsonl")).code == 2);
}
