#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serpsim/corpus.hpp"

namespace serpsim {

/// A ranked position holding an element id, or nullopt for the empty item
/// that stands in for a suppressed within-list duplicate. Empty items keep
/// their rank position but take part in no comparison.
using Slot = std::optional<std::string>;
using SlotList = std::vector<Slot>;

/// The list's URLs as slots, in rank order.
SlotList url_slots(const ResultList& list);

}  // namespace serpsim
