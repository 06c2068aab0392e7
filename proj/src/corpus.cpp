#include "serpsim/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "serpsim/error.hpp"

namespace serpsim {

using nlohmann::json;

std::string_view to_string(Stratum s) {
  switch (s) {
    case Stratum::HighlyFrequent: return "HighlyFrequent";
    case Stratum::Frequent: return "Frequent";
    case Stratum::Infrequent: return "Infrequent";
  }
  return "?";
}

DocumentText DocumentText::from_body(std::string url, std::string body) {
  DocumentText d;
  d.url = std::move(url);
  d.byte_len = body.size();
  d.body = std::move(body);
  return d;
}

std::string_view to_string(Grade g) {
  switch (g) {
    case Grade::Bad: return "Bad";
    case Grade::Fair: return "Fair";
    case Grade::Good: return "Good";
    case Grade::Excellent: return "Excellent";
    case Grade::Perfect: return "Perfect";
  }
  return "?";
}

std::optional<Grade> parse_grade(std::string_view label) {
  for (Grade g : {Grade::Bad, Grade::Fair, Grade::Good, Grade::Excellent, Grade::Perfect}) {
    if (label == to_string(g)) return g;
  }
  return std::nullopt;
}

void JudgmentSet::add(std::string query_id, std::string url, Grade grade) {
  auto key = std::make_pair(std::move(query_id), std::move(url));
  if (grades_.contains(key)) {
    throw DuplicateKeyError(fmt::format("duplicate judgment for ({}, {})", key.first, key.second));
  }
  grades_.emplace(std::move(key), grade);
}

std::optional<Grade> JudgmentSet::find(std::string_view query_id, std::string_view url) const {
  auto it = grades_.find(std::make_pair(std::string(query_id), std::string(url)));
  if (it == grades_.end()) return std::nullopt;
  return it->second;
}

bool JudgmentSet::covers_query(std::string_view query_id) const {
  auto it = grades_.lower_bound(std::make_pair(std::string(query_id), std::string()));
  return it != grades_.end() && it->first.first == query_id;
}

namespace {

// Splits into non-blank lines, keeping 1-based line numbers for messages.
std::vector<std::pair<std::size_t, std::string_view>> records(std::string_view bytes) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  while (!bytes.empty()) {
    ++line_no;
    auto nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

json parse_record(std::size_t line_no, std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError(fmt::format("line {}: malformed record", line_no));
  if (!j.is_object()) throw ParseError(fmt::format("line {}: record is not an object", line_no));
  return j;
}

template <class Error>
const json& require(const json& j, const char* field, std::size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    throw Error(fmt::format("line {}: missing field '{}'", line_no, field));
  }
  return *it;
}

template <class Error>
std::string require_string(const json& j, const char* field, std::size_t line_no) {
  const json& v = require<Error>(j, field, line_no);
  if (!v.is_string()) throw Error(fmt::format("line {}: field '{}' must be a string", line_no, field));
  return v.get<std::string>();
}

template <class Error>
std::int64_t require_int(const json& j, const char* field, std::size_t line_no) {
  const json& v = require<Error>(j, field, line_no);
  if (!v.is_number_integer()) {
    throw Error(fmt::format("line {}: field '{}' must be an integer", line_no, field));
  }
  return v.get<std::int64_t>();
}

bool valid_market(std::string_view m) {
  return m.size() == 2 && std::all_of(m.begin(), m.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

ResultList load_snapshot(std::string_view bytes, const LoadOptions& options) {
  auto lines = records(bytes);
  if (lines.empty()) throw ParseError("empty snapshot");

  ResultList list;
  {
    auto [line_no, text] = lines.front();
    json header = parse_record(line_no, text);
    list.query_id = require_string<SchemaError>(header, "query_id", line_no);
    list.engine = require_string<SchemaError>(header, "engine", line_no);
    list.market = require_string<SchemaError>(header, "market", line_no);
    list.fetched_at = require_int<SchemaError>(header, "fetched_at", line_no);
    if (list.query_id.empty()) throw SchemaError(fmt::format("line {}: empty query_id", line_no));
    if (list.engine.empty()) throw SchemaError(fmt::format("line {}: empty engine", line_no));
    if (!valid_market(list.market)) {
      throw SchemaError(fmt::format("line {}: market '{}' is not a 2-letter uppercase code", line_no, list.market));
    }
  }

  std::set<int> seen_ranks;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [line_no, text] = lines[i];
    json rec = parse_record(line_no, text);
    ResultEntry e;
    auto rank = require_int<SchemaError>(rec, "rank", line_no);
    if (rank < 1) throw SchemaError(fmt::format("line {}: rank must be >= 1", line_no));
    e.rank = static_cast<int>(rank);
    if (!seen_ranks.insert(e.rank).second) {
      throw SchemaError(fmt::format("line {}: duplicate rank {}", line_no, e.rank));
    }
    e.url = require_string<SchemaError>(rec, "url", line_no);
    if (e.url.empty()) throw SchemaError(fmt::format("line {}: empty url", line_no));
    bool has_path = rec.contains("doc_path");
    bool has_text = rec.contains("text");
    if (has_path && has_text) {
      throw SchemaError(fmt::format("line {}: both doc_path and text given", line_no));
    }
    if (has_path) e.doc_path = require_string<SchemaError>(rec, "doc_path", line_no);
    if (has_text) {
      e.doc = std::make_shared<const DocumentText>(
          DocumentText::from_body(e.url, require_string<SchemaError>(rec, "text", line_no)));
    }
    list.entries.push_back(std::move(e));
  }

  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const ResultEntry& a, const ResultEntry& b) { return a.rank < b.rank; });
  if (list.entries.size() > options.top_n) list.entries.resize(options.top_n);
  for (std::size_t i = 0; i < list.entries.size(); ++i) list.entries[i].rank = static_cast<int>(i + 1);
  return list;
}

std::string serialize_snapshot(const ResultList& list) {
  std::string out;
  json header = {{"query_id", list.query_id},
                 {"engine", list.engine},
                 {"market", list.market},
                 {"fetched_at", list.fetched_at}};
  out += header.dump();
  out += '\n';
  for (const auto& e : list.entries) {
    json rec = {{"rank", e.rank}, {"url", e.url}};
    if (e.doc) {
      rec["text"] = e.doc->body;
    } else if (!e.doc_path.empty()) {
      rec["doc_path"] = e.doc_path;
    }
    out += rec.dump();
    out += '\n';
  }
  return out;
}

JudgmentSet load_judgments(std::string_view bytes) {
  JudgmentSet set;
  for (auto [line_no, text] : records(bytes)) {
    json rec = parse_record(line_no, text);
    auto query_id = require_string<ParseError>(rec, "query_id", line_no);
    auto url = require_string<ParseError>(rec, "url", line_no);
    auto label = require_string<ParseError>(rec, "grade", line_no);
    auto grade = parse_grade(label);
    if (!grade) throw ParseError(fmt::format("line {}: unknown grade '{}'", line_no, label));
    set.add(std::move(query_id), std::move(url), *grade);
  }
  return set;
}

std::optional<std::string> DirectoryFetcher::fetch(const ResultEntry& entry) const {
  if (entry.doc_path.empty()) return std::nullopt;
  std::ifstream in(base_ / entry.doc_path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

ResultList attach_documents(ResultList list, const DocumentFetcher& fetcher) {
  for (auto& e : list.entries) {
    if (e.doc) continue;
    if (auto body = fetcher.fetch(e)) {
      e.doc = std::make_shared<const DocumentText>(DocumentText::from_body(e.url, std::move(*body)));
    }
  }
  return list;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

ResultList read_snapshot_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::string bytes = read_file(path);
  try {
    ResultList list = load_snapshot(bytes, options);
    return attach_documents(std::move(list), DirectoryFetcher(path.parent_path()));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const SchemaError& e) {
    throw SchemaError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

JudgmentSet read_judgments_file(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  try {
    return load_judgments(bytes);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const DuplicateKeyError& e) {
    throw DuplicateKeyError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace serpsim
