#pragma once

#include <cstddef>
#include <vector>

#include "elicit/respondent.hpp"

namespace elicit {

struct ReplayEntry {
  Query query;
  Answer answer;
  std::string raw;
};

/// Answers from a recorded transcript, in order. Single consumer.
class ReplayRespondent final : public Respondent {
 public:
  explicit ReplayRespondent(std::vector<ReplayEntry> entries) : entries_(std::move(entries)) {}

  /// Returns the next recorded answer. Throws ReplayDivergence when `query`
  /// differs from the recorded one and ReplayExhausted past the end.
  Response answer(const Query& query, Rng& rng) override;
  std::string_view kind() const override { return "replay"; }

  std::size_t position() const { return cursor_; }
  bool exhausted() const { return cursor_ >= entries_.size(); }

 private:
  std::vector<ReplayEntry> entries_;
  std::size_t cursor_ = 0;
};

}  // namespace elicit
