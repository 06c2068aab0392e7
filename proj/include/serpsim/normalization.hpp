#pragma once

// Cross-list URL normalization: documents that are duplicates of each other
// are bound to one canonical name, within a list and across the pair, and
// every later occurrence of a name inside the same list becomes an empty
// item.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <optional>
#include <utility>
#include <vector>

#include "serpsim/corpus.hpp"
#include "serpsim/dist_measures.hpp"
#include "serpsim/slot.hpp"
#include "serpsim/text.hpp"

namespace serpsim {

/// How items of the second list are matched against the first list.
/// Within-list matching always uses shingles.
enum class DupMode {
  Printed,             // consensus predicate across lists
  ShingleOnly,         // shingles across lists as well
  ShingleOrConsensus,  // either test across lists
};

std::string_view to_string(DupMode m);
std::optional<DupMode> parse_dup_mode(std::string_view name);

struct NormalizeConfig {
  double shingle_threshold = 0.5;
  ShingleParams shingles;
  ConsensusConfig consensus;
  DupMode mode = DupMode::Printed;
};

/// An item to normalize: its current name (nullopt for an empty item) and
/// its landing page, if fetched.
struct ListItem {
  Slot id;
  std::shared_ptr<const DocumentText> doc;
};

std::vector<ListItem> list_items(const ResultList& list);

struct NormalizedPair {
  SlotList sigma_tilde;
  SlotList pi_tilde;
  /// Canonical name bound to each input position before empty-item
  /// substitution; nullopt where the input already held an empty item.
  SlotList sigma_binding;
  SlotList pi_binding;

  std::size_t omega_sigma() const;
  std::size_t omega_pi() const;
};

bool duplicate_by_shingles(const DocumentText& d1, const DocumentText& d2, double threshold = 0.5,
                           ShingleParams params = {});

NormalizedPair normalize_items(std::span<const ListItem> sigma, std::span<const ListItem> pi,
                               const NormalizeConfig& cfg = {});

NormalizedPair normalize_lists(const ResultList& sigma, const ResultList& pi, const NormalizeConfig& cfg = {});

/// The normalized names paired with the documents of the positions they
/// came from; empty items carry no document. Feeding the result back into
/// normalize_items reproduces `pair`.
std::pair<std::vector<ListItem>, std::vector<ListItem>> carry_documents(const NormalizedPair& pair,
                                                                       std::span<const ListItem> sigma,
                                                                       std::span<const ListItem> pi);

/// Distinct names shared by the two lists, empty items excluded.
std::size_t shared_names(std::span<const Slot> a, std::span<const Slot> b);

}  // namespace serpsim
