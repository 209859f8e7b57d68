#include "elicit/llm_client.hpp"

#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "elicit/errors.hpp"

namespace elicit {

using json = nlohmann::json;

EndpointUrl split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint URL lacks a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("endpoint URL must be http or https: " + url);
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  EndpointUrl out;
  out.origin = url.substr(0, path_begin);
  out.path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
  if (out.origin.size() <= host_begin) throw std::invalid_argument("endpoint URL lacks a host: " + url);
  return out;
}

std::string chat_request_body(const std::string& model, double temperature, const std::string& prompt) {
  json body = {{"model", model},
               {"temperature", temperature},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  return body.dump();
}

std::string chat_reply_content(const std::string& body) {
  try {
    const auto parsed = json::parse(body);
    return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(fmt::format("unexpected chat-completion body: {}", e.what()));
  }
}

std::string_view respondent_kind_name(RespondentKind kind) {
  switch (kind) {
    case RespondentKind::Oracle: return "oracle";
    case RespondentKind::Llm: return "llm";
    case RespondentKind::Replay: return "replay";
  }
  return "?";
}

std::optional<RespondentKind> parse_respondent_kind(std::string_view text) {
  if (text == "oracle") return RespondentKind::Oracle;
  if (text == "llm") return RespondentKind::Llm;
  if (text == "replay") return RespondentKind::Replay;
  return std::nullopt;
}

LlmRespondent::LlmRespondent(RespondentConfig config)
    : config_(std::move(config)),
      url_(split_endpoint(config_.endpoint)),
      in_flight_(std::max(1, std::min(config_.max_concurrent_requests, 1024))) {
  if (config_.temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  if (config_.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }
}

std::string LlmRespondent::complete(const std::string& prompt) {
  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<1024>& sem;
    ~Release() { sem.release(); }
  } release{in_flight_};

  httplib::Client client(url_.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto result = client.Post(url_.path, headers, chat_request_body(config_.model, config_.temperature, prompt),
                                  "application/json");
  if (!result) {
    throw TransportError(fmt::format("request to {} failed: {}", url_.origin, httplib::to_string(result.error())));
  }
  if (result->status != 200) {
    throw TransportError(fmt::format("endpoint returned HTTP {}", result->status));
  }
  return chat_reply_content(result->body);
}

Response LlmRespondent::answer(const Query& query, Rng&) {
  const std::string prompt = render_prompt(query);
  std::vector<std::string> replies;
  for (int attempt = 1; attempt <= config_.max_retries + 1; ++attempt) {
    std::string raw = complete(prompt);
    try {
      Answer a = parse_answer(query, raw);
      return {std::move(a), std::move(raw), attempt};
    } catch (const MalformedAnswer&) {
      replies.push_back(std::move(raw));
    }
  }
  throw RespondentFailure(fmt::format("no parseable {} reply after {} attempts; last: \"{}\"",
                                      query_kind_name(query), replies.size(), replies.back()));
}

}  // namespace elicit
