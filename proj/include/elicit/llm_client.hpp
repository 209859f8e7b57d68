#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "elicit/respondent.hpp"

namespace elicit {

/// Scheme/host/port and path of a chat-completion endpoint URL.
struct EndpointUrl {
  std::string origin;  // e.g. "https://api.openai.com" or "http://127.0.0.1:8080"
  std::string path;    // e.g. "/v1/chat/completions"
};

/// Throws std::invalid_argument for URLs without http(s) scheme or host.
EndpointUrl split_endpoint(const std::string& url);

/// JSON request body: model, temperature and a single user message.
std::string chat_request_body(const std::string& model, double temperature, const std::string& prompt);

/// Extracts choices[0].message.content; throws TransportError on a malformed body.
std::string chat_reply_content(const std::string& body);

/// Chat-completion respondent. Each query is an independent, stateless
/// completion. Unparseable replies are re-asked with the identical prompt up to
/// `max_retries` more times before RespondentFailure. Network failures and
/// non-200 statuses raise TransportError.
class LlmRespondent final : public Respondent {
 public:
  explicit LlmRespondent(RespondentConfig config);

  Response answer(const Query& query, Rng& rng) override;
  std::string_view kind() const override { return "llm"; }

  /// One HTTP round trip; returns the reply text.
  std::string complete(const std::string& prompt);

  const RespondentConfig& config() const { return config_; }

 private:
  RespondentConfig config_;
  EndpointUrl url_;
  std::string api_key_;
  std::counting_semaphore<1024> in_flight_;
};

}  // namespace elicit
