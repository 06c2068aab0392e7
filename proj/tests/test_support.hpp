#pragma once

// Small builders shared by the unit tests.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "serpsim/corpus.hpp"

namespace testing {

// (url, body) pairs; an empty body means "no document".
inline serpsim::ResultList make_list(const std::vector<std::pair<std::string, std::string>>& items,
                                     std::string query = "q1", std::string engine = "e1", std::string market = "US") {
  serpsim::ResultList l;
  l.query_id = std::move(query);
  l.engine = std::move(engine);
  l.market = std::move(market);
  int rank = 0;
  for (const auto& [url, body] : items) {
    serpsim::ResultEntry e;
    e.rank = ++rank;
    e.url = url;
    if (!body.empty()) e.doc = std::make_shared<const serpsim::DocumentText>(serpsim::DocumentText::from_body(url, body));
    l.entries.push_back(std::move(e));
  }
  return l;
}

inline serpsim::ResultList make_urls(const std::vector<std::string>& urls, std::string query = "q1") {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& u : urls) items.emplace_back(u, "");
  return make_list(items, std::move(query));
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("serpsim-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
