#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "random.hpp"
#include "serpsim/error.hpp"
#include "serpsim/harness.hpp"

namespace serpsim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

JaccardScore score_of(std::size_t inter, std::size_t uni) {
  JaccardScore s;
  s.intersection_size = inter;
  s.union_size = uni;
  s.value = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  return s;
}

// Vocabulary word for an id: letters only, so the tokenizer keeps it whole.
std::string word(std::size_t id) {
  std::string w = "w";
  do {
    w += static_cast<char>('a' + id % 26);
    id /= 26;
  } while (id);
  return w;
}

struct Doc {
  std::vector<std::size_t> vocab;  // private vocabulary, word ids
  std::vector<std::size_t> terms;
};

Doc fresh_doc(const CorpusProfile& p, detail::Rng& rng) {
  Doc d;
  std::set<std::size_t> seen;
  while (d.vocab.size() < p.doc_vocabulary) {
    const std::size_t w = rng.below(p.vocabulary);
    if (seen.insert(w).second) d.vocab.push_back(w);
  }
  for (std::size_t i = 0; i < p.doc_terms; ++i) d.terms.push_back(d.vocab[rng.below(d.vocab.size())]);
  return d;
}

// Near copy: about 1% of positions (at least one) get another word of the
// same private vocabulary.
Doc near_copy(const Doc& src, detail::Rng& rng) {
  Doc d = src;
  const std::size_t edits = std::max<std::size_t>(1, d.terms.size() / 100);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t pos = rng.below(d.terms.size());
    std::size_t w = d.terms[pos];
    while (w == d.terms[pos]) w = d.vocab[rng.below(d.vocab.size())];
    d.terms[pos] = w;
  }
  return d;
}

std::string body_of(const Doc& d) {
  std::string out;
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    if (i) out += ' ';
    out += word(d.terms[i]);
  }
  out += '\n';
  return out;
}

// Largest-remainder split of n over the bucket fractions.
std::vector<std::size_t> allocate(const std::vector<OverlapBucket>& buckets, std::size_t n) {
  std::vector<std::size_t> counts(buckets.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    const double exact = buckets[b].fraction * static_cast<double>(n);
    counts[b] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    used += counts[b];
    rem.emplace_back(exact - static_cast<double>(counts[b]), b);
  }
  // ties go to the earlier bucket
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++counts[rem[i % rem.size()].second];
  return counts;
}

json profile_json(const CorpusProfile& p) {
  json overlap = json::array();
  for (const auto& b : p.overlap) overlap.push_back({{"common", b.common}, {"fraction", b.fraction}});
  return {{"queries", p.queries},
          {"list_len", p.list_len},
          {"markets", p.markets},
          {"engines", {p.engines.first, p.engines.second}},
          {"overlap", overlap},
          {"duplicate_pairs", p.duplicate_pairs},
          {"duplicate_fraction", p.duplicate_fraction},
          {"doc_terms", p.doc_terms},
          {"doc_vocabulary", p.doc_vocabulary},
          {"vocabulary", p.vocabulary},
          {"judgments", p.judgments},
          {"fetched_at", p.fetched_at}};
}

json score_json(const JaccardScore& s) {
  return {{"intersection", s.intersection_size}, {"union", s.union_size}, {"value", s.value}};
}

}  // namespace

void validate(const CorpusProfile& p) {
  auto bad = [](std::string msg) { throw InvalidProfile(std::move(msg)); };
  if (p.queries < 1) bad("queries must be >= 1");
  if (p.list_len < 1) bad("list_len must be >= 1");
  if (p.markets.empty()) bad("markets must not be empty");
  for (const auto& m : p.markets) {
    if (m.size() != 2 || !std::isupper(static_cast<unsigned char>(m[0])) ||
        !std::isupper(static_cast<unsigned char>(m[1]))) {
      bad(fmt::format("market '{}' is not an uppercase two-letter code", m));
    }
  }
  if (p.engines.first.empty() || p.engines.second.empty() || p.engines.first == p.engines.second) {
    bad("engines must be two distinct non-empty names");
  }
  if (p.overlap.empty()) bad("overlap must list at least one bucket");
  double total = 0.0;
  std::set<std::size_t> commons;
  for (const auto& b : p.overlap) {
    if (b.common > p.list_len) bad(fmt::format("overlap bucket common={} exceeds list_len={}", b.common, p.list_len));
    if (!(b.fraction >= 0.0)) bad("overlap fractions must be >= 0");
    if (!commons.insert(b.common).second) bad(fmt::format("overlap bucket common={} given twice", b.common));
    total += b.fraction;
  }
  if (std::abs(total - 1.0) > 1e-6) bad(fmt::format("overlap fractions sum to {}, not 1", total));
  if (!(p.duplicate_fraction >= 0.0 && p.duplicate_fraction <= 1.0)) bad("duplicate_fraction must be in [0,1]");
  if (p.duplicate_fraction > 0.0 && p.duplicate_pairs == 0) bad("duplicate_fraction > 0 needs duplicate_pairs >= 1");
  if (p.doc_terms < 1) bad("doc_terms must be >= 1");
  if (p.doc_vocabulary < 2) bad("doc_vocabulary must be >= 2");
  if (p.vocabulary < p.doc_vocabulary) bad("vocabulary must be >= doc_vocabulary");
}

CorpusProfile parse_profile(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidProfile("profile is not a JSON object");
  CorpusProfile p;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "queries") p.queries = v.get<std::size_t>();
      else if (key == "list_len") p.list_len = v.get<std::size_t>();
      else if (key == "markets") p.markets = v.get<std::vector<std::string>>();
      else if (key == "engines") {
        auto e = v.get<std::vector<std::string>>();
        if (e.size() != 2) throw InvalidProfile("engines must name exactly two engines");
        p.engines = {e[0], e[1]};
      } else if (key == "overlap") {
        p.overlap.clear();
        for (const auto& b : v) p.overlap.push_back({b.at("common").get<std::size_t>(), b.at("fraction").get<double>()});
      } else if (key == "duplicate_pairs") p.duplicate_pairs = v.get<std::size_t>();
      else if (key == "duplicate_fraction") p.duplicate_fraction = v.get<double>();
      else if (key == "doc_terms") p.doc_terms = v.get<std::size_t>();
      else if (key == "doc_vocabulary") p.doc_vocabulary = v.get<std::size_t>();
      else if (key == "vocabulary") p.vocabulary = v.get<std::size_t>();
      else if (key == "judgments") p.judgments = v.get<bool>();
      else if (key == "fetched_at") p.fetched_at = v.get<std::int64_t>();
      else throw InvalidProfile(fmt::format("unknown profile field '{}'", key));
    }
  } catch (const json::exception& e) {
    throw InvalidProfile(fmt::format("bad profile field: {}", e.what()));
  }
  validate(p);
  return p;
}

std::vector<GroundTruth> generate_corpus(const CorpusProfile& p, std::uint64_t seed, const fs::path& out) {
  validate(p);
  const std::size_t L = p.list_len;

  detail::Rng plan(detail::mix_seed(seed, detail::fnv1a64("plan")));
  std::vector<std::size_t> commons;
  const auto counts = allocate(p.overlap, p.queries);
  for (std::size_t b = 0; b < counts.size(); ++b) commons.insert(commons.end(), counts[b], p.overlap[b].common);
  plan.shuffle(commons);

  std::vector<std::size_t> order(p.queries);
  std::iota(order.begin(), order.end(), 0);
  const auto affected_n = static_cast<std::size_t>(std::llround(p.duplicate_fraction * static_cast<double>(p.queries)));
  plan.partial_shuffle(order, affected_n);
  std::vector<bool> affected(p.queries, false);
  for (std::size_t i = 0; i < affected_n; ++i) affected[order[i]] = true;

  std::vector<GroundTruth> truth;
  std::string truth_lines, judgment_lines;
  std::size_t next_doc = 0;
  const int width = std::max<int>(4, static_cast<int>(std::to_string(p.queries).size()));

  for (std::size_t q = 0; q < p.queries; ++q) {
    detail::Rng rng(detail::mix_seed(seed, q + 1));
    GroundTruth gt;
    gt.query_id = fmt::format("q{:0{}}", q + 1, width);
    gt.market = p.markets[q % p.markets.size()];
    gt.common = commons[q];
    const std::size_t c = gt.common;
    const std::size_t k = affected[q] ? std::min(p.duplicate_pairs, L - c) : 0;

    struct Item {
      std::string url;
      std::string path;
    };
    auto new_doc = [&](const Doc& d) {
      const std::size_t id = next_doc++;
      Item it{fmt::format("https://site{}.example/p/{:07d}", id % 97, id), fmt::format("../docs/d{:07d}.txt", id)};
      write_file(out / "docs" / fmt::format("d{:07d}.txt", id), body_of(d));
      return it;
    };

    // Shared docs, then left-only docs (the first k get a near copy on the
    // right), then the remaining right-only docs.
    std::vector<Item> shared, left_only, right_only;
    for (std::size_t i = 0; i < c; ++i) shared.push_back(new_doc(fresh_doc(p, rng)));
    for (std::size_t i = 0; i < L - c; ++i) {
      Doc d = fresh_doc(p, rng);
      left_only.push_back(new_doc(d));
      if (i < k) right_only.push_back(new_doc(near_copy(d, rng)));
    }
    while (right_only.size() < L - c) right_only.push_back(new_doc(fresh_doc(p, rng)));

    // Slot order: index < c is shared, c.. are the list's own docs.
    std::vector<std::size_t> left_order(L), right_order(L);
    std::iota(left_order.begin(), left_order.end(), 0);
    std::iota(right_order.begin(), right_order.end(), 0);
    rng.shuffle(left_order);
    rng.shuffle(right_order);

    auto build = [&](const std::string& engine, const std::vector<std::size_t>& slots, const std::vector<Item>& own,
                     std::vector<int>& rank_of_own) {
      ResultList list;
      list.query_id = gt.query_id;
      list.engine = engine;
      list.market = gt.market;
      list.fetched_at = p.fetched_at;
      rank_of_own.assign(L - c, 0);
      for (std::size_t r = 0; r < L; ++r) {
        const std::size_t s = slots[r];
        const Item& it = s < c ? shared[s] : own[s - c];
        if (s >= c) rank_of_own[s - c] = static_cast<int>(r + 1);
        list.entries.push_back({static_cast<int>(r + 1), it.url, it.path, nullptr});
      }
      write_file(out / "snapshots" / fmt::format("{}.{}.jsonl", gt.query_id, engine), serialize_snapshot(list));
      return list;
    };
    std::vector<int> left_rank, right_rank;
    const ResultList left = build(p.engines.first, left_order, left_only, left_rank);
    const ResultList right = build(p.engines.second, right_order, right_only, right_rank);
    for (std::size_t i = 0; i < k; ++i) gt.duplicate_pairs.emplace_back(left_rank[i], right_rank[i]);

    gt.planted_j_url = score_of(c, 2 * L - c);
    gt.expected_j_url = score_of(c + k, 2 * L - c - k);

    if (p.judgments) {
      std::set<std::string> judged;
      for (const auto* list : {&left, &right}) {
        for (const auto& e : list->entries) {
          if (!judged.insert(e.url).second) continue;
          const auto g = static_cast<Grade>(1 + rng.below(5));
          judgment_lines += json{{"query_id", gt.query_id}, {"url", e.url}, {"grade", to_string(g)}}.dump() + "\n";
        }
      }
    }

    json pairs = json::array();
    for (auto [l, r] : gt.duplicate_pairs) pairs.push_back({l, r});
    truth_lines += json{{"query_id", gt.query_id},
                        {"market", gt.market},
                        {"common", gt.common},
                        {"duplicate_pairs", pairs},
                        {"planted_j_url", score_json(gt.planted_j_url)},
                        {"expected_j_url", score_json(gt.expected_j_url)}}
                       .dump() +
                   "\n";
    truth.push_back(std::move(gt));
  }

  write_file(out / "ground_truth.jsonl", truth_lines);
  write_file(out / "profile.json", profile_json(p).dump(2) + "\n");
  if (p.judgments) write_file(out / "judgments.jsonl", judgment_lines);
  return truth;
}

std::vector<GroundTruth> load_ground_truth(const fs::path& file) {
  const std::string text = read_file(file);
  std::vector<GroundTruth> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line(text.data() + start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(fmt::format("{}:{}: malformed JSON", file.string(), line_no));
    try {
      GroundTruth gt;
      gt.query_id = j.at("query_id").get<std::string>();
      gt.market = j.at("market").get<std::string>();
      gt.common = j.at("common").get<std::size_t>();
      for (const auto& pr : j.at("duplicate_pairs")) gt.duplicate_pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
      auto score = [&](const char* key) {
        const auto& s = j.at(key);
        return score_of(s.at("intersection").get<std::size_t>(), s.at("union").get<std::size_t>());
      };
      gt.planted_j_url = score("planted_j_url");
      gt.expected_j_url = score("expected_j_url");
      out.push_back(std::move(gt));
    } catch (const json::exception& e) {
      throw SchemaError(fmt::format("{}:{}: {}", file.string(), line_no, e.what()));
    }
  }
  return out;
}

}  // namespace serpsim
