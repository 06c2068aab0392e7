#pragma once

// Domain types for queries, result snapshots, documents and editorial
// judgments, plus ingestion of the line-oriented file formats described in
// docs/formats.md.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace serpsim {

enum class Stratum { HighlyFrequent, Frequent, Infrequent };

std::string_view to_string(Stratum s);

struct QueryRecord {
  std::string id;
  std::string text;
  std::string market;  // uppercase ISO-3166 alpha-2
  Stratum stratum = Stratum::Infrequent;
  std::int64_t timestamp = 0;  // UTC seconds
};

/// Post-extraction plain text of a landing page.
struct DocumentText {
  std::string url;
  std::string body;
  std::size_t byte_len = 0;

  static DocumentText from_body(std::string url, std::string body);

  friend bool operator==(const DocumentText&, const DocumentText&) = default;
};

struct ResultEntry {
  int rank = 0;  // 1-based
  std::string url;
  // Where the document lives relative to the snapshot file, if the snapshot
  // references one instead of inlining it.
  std::string doc_path;
  // Null when the landing page was never fetched or has not been attached.
  std::shared_ptr<const DocumentText> doc;

  friend bool operator==(const ResultEntry& a, const ResultEntry& b) {
    if (a.rank != b.rank || a.url != b.url || a.doc_path != b.doc_path) return false;
    if (!a.doc || !b.doc) return !a.doc && !b.doc;
    return *a.doc == *b.doc;
  }
};

/// One engine's ranked answer for one query.
struct ResultList {
  std::string query_id;
  std::string engine;
  std::string market;
  std::int64_t fetched_at = 0;
  std::vector<ResultEntry> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const ResultList&, const ResultList&) = default;
};

enum class Grade { Bad = 1, Fair = 2, Good = 3, Excellent = 4, Perfect = 5 };

std::string_view to_string(Grade g);
std::optional<Grade> parse_grade(std::string_view label);

class JudgmentSet {
 public:
  /// Throws DuplicateKeyError if (query_id, url) is already present.
  void add(std::string query_id, std::string url, Grade grade);

  std::optional<Grade> find(std::string_view query_id, std::string_view url) const;
  bool covers_query(std::string_view query_id) const;
  std::size_t size() const { return grades_.size(); }
  bool empty() const { return grades_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, Grade, std::less<>> grades_;
};

struct LoadOptions {
  std::size_t top_n = 10;
};

/// Parses a snapshot file. Entries are ordered by rank, truncated to
/// `top_n` and renumbered 1..m. Documents given by `doc_path` are not read
/// here; see attach_documents.
ResultList load_snapshot(std::string_view bytes, const LoadOptions& options = {});

/// Inverse of load_snapshot for a validated list: attached documents are
/// written inline, otherwise the original doc_path is kept.
std::string serialize_snapshot(const ResultList& list);

JudgmentSet load_judgments(std::string_view bytes);

/// Source of landing-page text for result entries. Swappable so that the
/// harness can run against file snapshots, fixtures or a live crawler.
class DocumentFetcher {
 public:
  virtual ~DocumentFetcher() = default;
  virtual std::optional<std::string> fetch(const ResultEntry& entry) const = 0;
};

/// Reads `doc_path` relative to a base directory.
class DirectoryFetcher final : public DocumentFetcher {
 public:
  explicit DirectoryFetcher(std::filesystem::path base) : base_(std::move(base)) {}
  std::optional<std::string> fetch(const ResultEntry& entry) const override;

 private:
  std::filesystem::path base_;
};

/// Returns a copy of `list` with documents resolved for every entry that has
/// none attached yet. Entries the fetcher cannot serve stay without a doc.
ResultList attach_documents(ResultList list, const DocumentFetcher& fetcher);

std::string read_file(const std::filesystem::path& path);

/// load_snapshot on a file, with doc_path entries resolved relative to the
/// file's directory.
ResultList read_snapshot_file(const std::filesystem::path& path, const LoadOptions& options = {});

JudgmentSet read_judgments_file(const std::filesystem::path& path);

}  // namespace serpsim
