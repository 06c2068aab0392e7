#pragma once

// Stratified query sampling: queries are split into three frequency strata
// and the same number is drawn, without replacement, from each.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "serpsim/corpus.hpp"

namespace serpsim {

struct QueryLogRecord {
  std::string id;  // empty when the log does not name its queries
  std::string text;
  std::string market;
  std::uint64_t count = 1;
  std::int64_t timestamp = 0;
};

struct QueryLog {
  std::vector<QueryLogRecord> records;
};

/// JSON-lines records {text, market, count, timestamp[, id]}.
QueryLog load_query_log(std::string_view bytes);

struct StrataConfig {
  std::uint64_t hi = 1000;  // count >= hi: highly frequent
  std::uint64_t lo = 10;    // lo <= count < hi: frequent; below: infrequent
  std::size_t per_stratum = 1;
  std::uint64_t seed = 0;
  /// Query texts drawn on earlier days; never drawn again.
  std::set<std::string> exclude;
};

Stratum stratum_of(std::uint64_t count, const StrataConfig& cfg);

/// Records of one market are merged by text (counts summed, earliest
/// timestamp kept) before drawing. Output is grouped by stratum, in log order
/// within a stratum. Throws EmptyMarket, InvalidSpec.
std::vector<QueryRecord> stratified_sample(const QueryLog& log, std::string_view market, const StrataConfig& cfg);

}  // namespace serpsim
