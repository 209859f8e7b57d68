#include "elicit/replay.hpp"

#include <fmt/format.h>

#include "elicit/errors.hpp"

namespace elicit {

Response ReplayRespondent::answer(const Query& query, Rng&) {
  if (exhausted()) {
    throw ReplayExhausted(fmt::format("replay log exhausted after {} entries", entries_.size()));
  }
  const ReplayEntry& entry = entries_[cursor_];
  if (!(entry.query == query)) {
    throw ReplayDivergence(fmt::format("entry {}: recorded {} query differs from requested {} query",
                                       cursor_, query_kind_name(entry.query), query_kind_name(query)));
  }
  ++cursor_;
  return {entry.answer, entry.raw, 1};
}

}  // namespace elicit
