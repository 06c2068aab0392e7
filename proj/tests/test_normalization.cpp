#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "serpsim/normalization.hpp"
#include "serpsim/set_measures.hpp"
#include "test_support.hpp"

using namespace serpsim;
using testing::make_list;

namespace {

std::shared_ptr<const DocumentText> doc(const std::string& body) {
  return std::make_shared<const DocumentText>(DocumentText::from_body("", body));
}

ListItem item(const char* name, const std::string& body) { return {std::string(name), body.empty() ? nullptr : doc(body)}; }

Slot s(const char* name = nullptr) { return name ? Slot(name) : Slot(); }

// 120 terms over a 40-word vocabulary private to the family.
std::string family_text(int family, int variant) {
  std::mt19937 rng(static_cast<unsigned>(family * 7919 + 1));
  std::vector<std::string> terms;
  for (int i = 0; i < 120; ++i) terms.push_back("f" + std::to_string(family) + "w" + std::to_string(rng() % 40));
  if (variant > 0) {
    // one substitution per variant, at distinct positions
    terms[static_cast<std::size_t>(variant * 13 % 120)] = "f" + std::to_string(family) + "w" + std::to_string(variant % 40);
  }
  std::string out;
  for (const auto& t : terms) out += t + " ";
  return out;
}

// Exact-match URL overlap, empty items excluded.
std::size_t exact_shared(const std::vector<ListItem>& a, const std::vector<ListItem>& b) {
  std::set<std::string> x, y;
  for (const auto& i : a) if (i.id) x.insert(*i.id);
  for (const auto& i : b) if (i.id) y.insert(*i.id);
  std::size_t n = 0;
  for (const auto& v : x) n += y.count(v);
  return n;
}

void check_shape(const NormalizedPair& out, std::size_t ls, std::size_t lp) {
  REQUIRE(out.sigma_tilde.size() == ls);
  REQUIRE(out.pi_tilde.size() == lp);
  for (const SlotList* l : {&out.sigma_tilde, &out.pi_tilde}) {
    std::set<std::string> seen;
    for (const auto& v : *l) if (v) CHECK(seen.insert(*v).second);
  }
  // empty items are exactly the repeated bindings
  for (auto [tilde, binding] : {std::pair{&out.sigma_tilde, &out.sigma_binding}, std::pair{&out.pi_tilde, &out.pi_binding}}) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < binding->size(); ++i) {
      const auto& b = (*binding)[i];
      if (!b) {
        CHECK_FALSE((*tilde)[i]);
        continue;
      }
      const bool repeat = !seen.insert(*b).second;
      CHECK(repeat == !(*tilde)[i].has_value());
      if (!repeat) CHECK((*tilde)[i] == b);
    }
  }
}

}  // namespace

TEST_CASE("mode names round-trip") {
  for (DupMode m : {DupMode::Printed, DupMode::ShingleOnly, DupMode::ShingleOrConsensus}) {
    CHECK(parse_dup_mode(to_string(m)) == m);
  }
  CHECK_FALSE(parse_dup_mode("both"));
}

TEST_CASE("shingle duplicate test") {
  auto a = DocumentText::from_body("a", "some words that repeat some words");
  CHECK(duplicate_by_shingles(a, a));
  ShingleParams w3{3, 1000};
  auto fwd = DocumentText::from_body("x", "a b c a b c");
  auto rev = DocumentText::from_body("y", "c b a c b a");
  CHECK_FALSE(duplicate_by_shingles(fwd, rev, 0.5, w3));
  // 2 shared of 4 each: 2/6
  auto d1 = DocumentText::from_body("1", "a b c d e f");
  auto d2 = DocumentText::from_body("2", "c d e f g h");
  CHECK_FALSE(duplicate_by_shingles(d1, d2, 0.5, w3));
  // boundary: 2 of 4, exactly 0.5
  auto d3 = DocumentText::from_body("3", "a b c d");
  CHECK(duplicate_by_shingles(d3, d1, 0.5, w3));
}

TEST_CASE("disjoint distinct documents are left alone") {
  std::vector<ListItem> sigma = {item("u1", family_text(1, 0)), item("u2", family_text(2, 0))};
  std::vector<ListItem> pi = {item("v1", family_text(3, 0)), item("v2", family_text(4, 0))};
  auto out = normalize_items(sigma, pi);
  CHECK(out.sigma_tilde == SlotList{s("u1"), s("u2")});
  CHECK(out.pi_tilde == SlotList{s("v1"), s("v2")});
  CHECK(out.omega_sigma() == 0);
  CHECK(out.omega_pi() == 0);
}

TEST_CASE("a cross-list duplicate takes the first list's name") {
  std::vector<ListItem> sigma = {item("u1", family_text(1, 0)), item("u2", family_text(2, 0))};
  std::vector<ListItem> pi = {item("v1", family_text(1, 1)), item("v2", family_text(3, 0))};
  auto before = j_url(SlotList{s("u1"), s("u2")}, SlotList{s("v1"), s("v2")}, 10);
  auto out = normalize_items(sigma, pi);
  CHECK(out.pi_tilde == SlotList{s("u1"), s("v2")});
  CHECK(before.value == 0.0);
  CHECK(j_url(out.sigma_tilde, out.pi_tilde, 10).value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a within-list duplicate becomes an empty item") {
  std::vector<ListItem> sigma = {item("u1", family_text(1, 0)), item("u1x", family_text(1, 2))};
  std::vector<ListItem> pi = {item("v1", family_text(5, 0))};
  auto out = normalize_items(sigma, pi);
  CHECK(out.sigma_tilde == SlotList{s("u1"), s()});
  CHECK(out.sigma_binding == SlotList{s("u1"), s("u1")});
  CHECK(out.omega_sigma() == 1);
  check_shape(out, 2, 1);
}

TEST_CASE("names already used by the first list win") {
  // v2 duplicates both v1 (within pi) and u1 (across); u1's name is preferred
  std::vector<ListItem> sigma = {item("u0", family_text(9, 0)), item("u1", family_text(1, 0))};
  std::vector<ListItem> pi = {item("v1", family_text(1, 1)), item("v2", family_text(1, 2))};
  auto out = normalize_items(sigma, pi);
  CHECK(out.pi_binding == SlotList{s("u1"), s("u1")});
  CHECK(out.pi_tilde == SlotList{s("u1"), s()});
}

TEST_CASE("duplicate modes differ on the reversed-letter pair") {
  NormalizeConfig cfg;
  cfg.shingles = {3, 1000};
  std::vector<ListItem> sigma = {item("u", "a b c a b c")};
  std::vector<ListItem> pi = {item("v", "c b a c b a")};
  cfg.mode = DupMode::Printed;
  CHECK(normalize_items(sigma, pi, cfg).pi_tilde == SlotList{s("u")});
  cfg.mode = DupMode::ShingleOnly;
  CHECK(normalize_items(sigma, pi, cfg).pi_tilde == SlotList{s("v")});
  cfg.mode = DupMode::ShingleOrConsensus;
  CHECK(normalize_items(sigma, pi, cfg).pi_tilde == SlotList{s("u")});
  // within a list only shingles count
  std::vector<ListItem> both = {item("u", "a b c a b c"), item("v", "c b a c b a")};
  CHECK(normalize_items(both, {}, cfg).sigma_tilde == SlotList{s("u"), s("v")});
}

TEST_CASE("missing documents fall back to exact names") {
  std::vector<ListItem> sigma = {item("u1", ""), item("u2", family_text(1, 0)), item("u1", "")};
  std::vector<ListItem> pi = {item("u1", ""), item("u2", "")};
  auto out = normalize_items(sigma, pi);
  CHECK(out.sigma_tilde == SlotList{s("u1"), s("u2"), s()});
  CHECK(out.pi_tilde == SlotList{s("u1"), s("u2")});
}

TEST_CASE("input empty items stay empty") {
  std::vector<ListItem> sigma = {item("u1", family_text(1, 0)), {std::nullopt, nullptr}, item("u2", family_text(2, 0))};
  std::vector<ListItem> pi = {{std::nullopt, nullptr}, item("v", family_text(2, 1))};
  auto out = normalize_items(sigma, pi);
  CHECK(out.sigma_tilde == SlotList{s("u1"), s(), s("u2")});
  CHECK(out.pi_tilde == SlotList{s(), s("u2")});
}

TEST_CASE("normalize_lists reads names and documents from result lists") {
  auto a = make_list({{"u1", family_text(1, 0)}, {"u2", family_text(2, 0)}});
  auto b = make_list({{"v1", family_text(2, 3)}}, "q1", "e2");
  auto out = normalize_lists(a, b);
  CHECK(out.pi_tilde == SlotList{s("u2")});
  auto ident = normalize_lists(a, a);
  CHECK(ident.sigma_tilde == ident.pi_tilde);
  CHECK(shared_names(ident.sigma_tilde, ident.pi_tilde) == 2);
}

TEST_CASE("normalization properties on equivalence-class fixtures") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    // each family contributes at most one member per list, URL -> doc fixed
    const int families = 8;
    auto draw = [&](int len, const char* prefix) {
      std::vector<int> fam(families);
      std::iota(fam.begin(), fam.end(), 0);
      std::shuffle(fam.begin(), fam.end(), rng);
      std::vector<ListItem> out;
      for (int i = 0; i < len; ++i) {
        const int f = fam[static_cast<std::size_t>(i)];
        const int variant = static_cast<int>(rng() % 3);
        // variant 0 shares its URL across lists; others are list-specific
        const std::string url = variant == 0 ? "f" + std::to_string(f) : std::string(prefix) + std::to_string(f) + "-" + std::to_string(variant);
        out.push_back({url, doc(family_text(f, variant == 0 ? 0 : variant + (prefix[0] == 'p' ? 10 : 0)))});
      }
      return out;
    };
    auto sigma = draw(1 + static_cast<int>(rng() % 6), "s");
    auto pi = draw(1 + static_cast<int>(rng() % 6), "p");
    for (DupMode mode : {DupMode::Printed, DupMode::ShingleOnly, DupMode::ShingleOrConsensus}) {
      NormalizeConfig cfg;
      cfg.mode = mode;
      cfg.consensus.resamples = 99;
      auto out = normalize_items(sigma, pi, cfg);
      check_shape(out, sigma.size(), pi.size());
      CHECK(shared_names(out.sigma_tilde, out.pi_tilde) >= exact_shared(sigma, pi));
      auto [s2, p2] = carry_documents(out, sigma, pi);
      auto again = normalize_items(s2, p2, cfg);
      CHECK(again.sigma_tilde == out.sigma_tilde);
      CHECK(again.pi_tilde == out.pi_tilde);
      auto rerun = normalize_items(sigma, pi, cfg);
      CHECK(rerun.pi_tilde == out.pi_tilde);
    }
  }
}
