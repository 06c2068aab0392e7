#include "serpsim/sampling.hpp"

#include <algorithm>
#include <array>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "random.hpp"
#include "serpsim/error.hpp"

namespace serpsim {

QueryLog load_query_log(std::string_view bytes) {
  QueryLog log;
  std::size_t line_no = 0;
  while (!bytes.empty()) {
    ++line_no;
    auto nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(fmt::format("line {}: malformed record", line_no));
    try {
      QueryLogRecord r;
      r.text = j.at("text").get<std::string>();
      r.market = j.at("market").get<std::string>();
      auto count = j.at("count").get<std::int64_t>();
      if (count < 1) throw SchemaError(fmt::format("line {}: count must be >= 1", line_no));
      r.count = static_cast<std::uint64_t>(count);
      r.timestamp = j.at("timestamp").get<std::int64_t>();
      if (j.contains("id")) r.id = j.at("id").get<std::string>();
      log.records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return log;
}

Stratum stratum_of(std::uint64_t count, const StrataConfig& cfg) {
  if (count >= cfg.hi) return Stratum::HighlyFrequent;
  if (count >= cfg.lo) return Stratum::Frequent;
  return Stratum::Infrequent;
}

std::vector<QueryRecord> stratified_sample(const QueryLog& log, std::string_view market, const StrataConfig& cfg) {
  if (!(cfg.hi > cfg.lo && cfg.lo >= 1)) throw InvalidSpec("strata need hi > lo >= 1");
  if (cfg.per_stratum < 1) throw InvalidSpec("per-stratum sample size must be >= 1");

  // Merge repeated texts so no query can be drawn twice.
  std::vector<QueryLogRecord> queries;
  std::map<std::string, std::size_t> by_text;
  for (const auto& r : log.records) {
    if (r.market != market) continue;
    auto [it, fresh] = by_text.emplace(r.text, queries.size());
    if (fresh) {
      queries.push_back(r);
    } else {
      auto& q = queries[it->second];
      q.count += r.count;
      q.timestamp = std::min(q.timestamp, r.timestamp);
      if (q.id.empty()) q.id = r.id;
    }
  }
  if (queries.empty()) throw EmptyMarket(fmt::format("no queries for market {}", market));

  std::array<std::vector<std::size_t>, 3> strata;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (cfg.exclude.contains(queries[i].text)) continue;
    strata[static_cast<std::size_t>(stratum_of(queries[i].count, cfg))].push_back(i);
  }

  detail::Rng rng(detail::mix_seed(cfg.seed, detail::fnv1a64(market)));
  std::vector<QueryRecord> out;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto& members = strata[s];
    const std::size_t take = std::min(cfg.per_stratum, members.size());
    rng.partial_shuffle(members, take);
    members.resize(take);
    std::sort(members.begin(), members.end());
    for (std::size_t i : members) {
      const auto& q = queries[i];
      QueryRecord rec;
      rec.id = q.id.empty() ? fmt::format("{}-{:016x}", market, detail::fnv1a64(q.text))
                            : q.id;
      rec.text = q.text;
      rec.market = q.market;
      rec.stratum = static_cast<Stratum>(s);
      rec.timestamp = q.timestamp;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace serpsim
