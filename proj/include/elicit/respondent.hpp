#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "elicit/query.hpp"
#include "elicit/rng.hpp"

namespace elicit {

/// A parsed answer together with the reply text it came from.
struct Response {
  Answer answer;
  std::string raw;
  int attempts = 1;
};

/// Anything that can answer the four query kinds. Implementations shared
/// between chains must be safe to call concurrently; `rng` is owned by the
/// calling chain.
class Respondent {
 public:
  virtual ~Respondent() = default;
  virtual Response answer(const Query& query, Rng& rng) = 0;
  virtual std::string_view kind() const = 0;
};

enum class RespondentKind { Oracle, Llm, Replay };

std::string_view respondent_kind_name(RespondentKind kind);
std::optional<RespondentKind> parse_respondent_kind(std::string_view text);

/// How the oracle answers MatchJudgment: graded yes-probability density/max,
/// or a hard indicator density >= threshold * max.
enum class MatchRule { Graded, Threshold };

struct RespondentConfig {
  RespondentKind kind = RespondentKind::Oracle;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 1.0;
  int max_retries = 3;
  std::chrono::milliseconds timeout{60000};
  int max_concurrent_requests = 4;
  std::uint64_t seed = 0;
  MatchRule match_rule = MatchRule::Graded;
  double match_threshold = 0.5;
};

}  // namespace elicit
