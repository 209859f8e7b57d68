#include "elicit/chain_log.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "elicit/errors.hpp"

namespace elicit {

using json = nlohmann::json;

namespace {

json color_json(const HslColor& c) { return json::array({c.h, c.s, c.l}); }

HslColor color_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("color must be [h, s, l]");
  HslColor c{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
  if (!c.is_canonical()) throw std::runtime_error("color outside the HSL cube");
  return c;
}

Dimension dimension_from(const json& j) {
  const auto d = parse_dimension(j.get<std::string>());
  if (!d) throw std::runtime_error("unknown dimension");
  return *d;
}

json query_json(const Query& q) {
  json j{{"kind", query_kind_name(q)}, {"object", query_object(q)}};
  if (const auto* m = std::get_if<MatchJudgment>(&q)) j["color"] = color_json(m->color);
  if (const auto* p = std::get_if<PairwiseChoice>(&q)) {
    j["option_a"] = color_json(p->option_a);
    j["option_b"] = color_json(p->option_b);
  }
  if (const auto* f = std::get_if<DimensionFill>(&q)) {
    j["known"] = color_json(f->known);
    j["missing"] = dimension_name(f->missing);
  }
  return j;
}

Query query_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  auto object = j.at("object").get<std::string>();
  if (kind == "report_color") return ReportColor{object};
  if (kind == "match_judgment") return MatchJudgment{object, color_from(j.at("color"))};
  if (kind == "pairwise_choice") {
    return PairwiseChoice{object, color_from(j.at("option_a")), color_from(j.at("option_b"))};
  }
  if (kind == "dimension_fill") {
    return make_dimension_fill(object, color_from(j.at("known")), dimension_from(j.at("missing")));
  }
  throw std::runtime_error("unknown query kind '" + kind + "'");
}

json answer_json(const Answer& a) {
  struct Visitor {
    json operator()(const ColorCode& v) const { return {{"kind", "color_code"}, {"color", color_json(v.color)}}; }
    json operator()(const YesNo& v) const { return {{"kind", "yes_no"}, {"yes", v.yes}}; }
    json operator()(const ChoiceAnswer& v) const {
      return {{"kind", "choice"}, {"choice", v.choice == Choice::A ? "A" : "B"}};
    }
    json operator()(const DimensionValue& v) const { return {{"kind", "dimension_value"}, {"value", v.value}}; }
  };
  return std::visit(Visitor{}, a);
}

Answer answer_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "color_code") return ColorCode{color_from(j.at("color"))};
  if (kind == "yes_no") return YesNo{j.at("yes").get<bool>()};
  if (kind == "choice") {
    const auto c = j.at("choice").get<std::string>();
    if (c != "A" && c != "B") throw std::runtime_error("choice must be A or B");
    return ChoiceAnswer{c == "A" ? Choice::A : Choice::B};
  }
  if (kind == "dimension_value") return DimensionValue{j.at("value").get<int>()};
  throw std::runtime_error("unknown answer kind '" + kind + "'");
}

Method method_from(const json& j) {
  const auto m = parse_method(j.get<std::string>());
  if (!m) throw std::runtime_error("unknown method");
  return *m;
}

void put_extra(json& j, const std::map<std::string, std::string>& extra) {
  for (const auto& [key, value] : extra) {
    if (!j.contains(key)) j[key] = json::parse(value);
  }
}

std::map<std::string, std::string> take_extra(const json& j, std::initializer_list<std::string_view> known) {
  std::map<std::string, std::string> extra;
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) extra.emplace(key, value.dump());
  }
  return extra;
}

json header_json(const ChainLogHeader& h) {
  json order = json::array();
  for (Dimension d : h.gibbs_order) order.push_back(dimension_name(d));
  json j{{"type", "header"},
         {"version", h.version},
         {"config_digest", h.config_digest},
         {"master_seed", h.master_seed},
         {"object", h.object},
         {"object_index", h.object_index},
         {"method", method_name(h.method)},
         {"chain_id", h.chain_id},
         {"respondent", h.respondent},
         {"iterations", h.iterations},
         {"proposal_variance", h.proposal_variance},
         {"uniform_jump_probability", h.uniform_jump_probability},
         {"gibbs_order", order},
         {"gibbs_count_sweeps", h.gibbs_count_sweeps}};
  put_extra(j, h.extra);
  return j;
}

ChainLogHeader header_from(const json& j) {
  ChainLogHeader h;
  h.version = j.at("version").get<int>();
  h.config_digest = j.at("config_digest").get<std::string>();
  h.master_seed = j.at("master_seed").get<std::uint64_t>();
  h.object = j.at("object").get<std::string>();
  h.object_index = j.at("object_index").get<int>();
  h.method = method_from(j.at("method"));
  h.chain_id = j.at("chain_id").get<int>();
  h.respondent = j.value("respondent", std::string());
  h.iterations = j.at("iterations").get<int>();
  h.proposal_variance = j.value("proposal_variance", 30.0);
  h.uniform_jump_probability = j.value("uniform_jump_probability", 0.1);
  if (j.contains("gibbs_order")) {
    h.gibbs_order.clear();
    for (const auto& d : j.at("gibbs_order")) h.gibbs_order.push_back(dimension_from(d));
  }
  h.gibbs_count_sweeps = j.value("gibbs_count_sweeps", false);
  h.extra = take_extra(j, {"type", "version", "config_digest", "master_seed", "object", "object_index", "method",
                           "chain_id", "respondent", "iterations", "proposal_variance", "uniform_jump_probability",
                           "gibbs_order", "gibbs_count_sweeps"});
  return h;
}

json record_json(const ChainRecord& r) {
  json j{{"type", "record"},
         {"chain_id", r.chain_id},
         {"iteration", r.iteration},
         {"method", method_name(r.method)},
         {"current", color_json(r.current)},
         {"proposal", r.proposal ? color_json(*r.proposal) : json(nullptr)},
         {"proposal_kind", proposal_kind_name(r.proposal_kind)},
         {"candidate_first", r.candidate_first ? json(*r.candidate_first) : json(nullptr)},
         {"query", query_json(r.query)},
         {"prompt", r.prompt},
         {"raw_answer", r.raw_answer},
         {"answer", answer_json(r.answer)},
         {"attempts", r.attempts},
         {"result", color_json(r.result)},
         {"accepted", r.accepted},
         {"fill_canonicalized", r.fill_canonicalized},
         {"timestamp", r.timestamp ? json(*r.timestamp) : json(nullptr)}};
  put_extra(j, r.extra);
  return j;
}

ChainRecord record_from(const json& j) {
  ChainRecord r;
  r.chain_id = j.at("chain_id").get<int>();
  r.iteration = j.at("iteration").get<int>();
  r.method = method_from(j.at("method"));
  r.current = color_from(j.at("current"));
  if (!j.at("proposal").is_null()) r.proposal = color_from(j.at("proposal"));
  const auto kind = parse_proposal_kind(j.at("proposal_kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown proposal kind");
  r.proposal_kind = *kind;
  if (!j.at("candidate_first").is_null()) r.candidate_first = j.at("candidate_first").get<bool>();
  r.query = query_from(j.at("query"));
  r.prompt = j.at("prompt").get<std::string>();
  r.raw_answer = j.at("raw_answer").get<std::string>();
  r.answer = answer_from(j.at("answer"));
  if (!answer_matches(r.query, r.answer)) throw std::runtime_error("answer kind does not match query kind");
  r.attempts = j.at("attempts").get<int>();
  r.result = color_from(j.at("result"));
  r.accepted = j.at("accepted").get<bool>();
  r.fill_canonicalized = j.value("fill_canonicalized", false);
  if (j.contains("timestamp") && !j.at("timestamp").is_null()) r.timestamp = j.at("timestamp").get<std::string>();
  r.extra = take_extra(j, {"type", "chain_id", "iteration", "method", "current", "proposal", "proposal_kind",
                           "candidate_first", "query", "prompt", "raw_answer", "answer", "attempts", "result",
                           "accepted", "fill_canonicalized", "timestamp"});
  return r;
}

json footer_json(const ChainLogFooter& f) {
  json j{{"type", "footer"}, {"complete", f.complete}, {"error", f.error}, {"accept_count", f.accept_count}};
  put_extra(j, f.extra);
  return j;
}

ChainLogFooter footer_from(const json& j) {
  ChainLogFooter f;
  f.complete = j.at("complete").get<bool>();
  f.error = j.value("error", std::string());
  f.accept_count = j.value("accept_count", 0);
  f.extra = take_extra(j, {"type", "complete", "error", "accept_count"});
  return f;
}

}  // namespace

ChainLogHeader make_header(const ChainOutput& chain, const SamplerConfig& cfg, std::string config_digest,
                           std::string respondent_kind) {
  ChainLogHeader h;
  h.config_digest = std::move(config_digest);
  h.master_seed = cfg.master_seed;
  h.object = chain.object;
  h.object_index = chain.object_index;
  h.method = chain.method;
  h.chain_id = chain.chain_id;
  h.respondent = std::move(respondent_kind);
  h.iterations = cfg.iterations;
  h.proposal_variance = cfg.proposal_variance;
  h.uniform_jump_probability = cfg.uniform_jump_probability;
  h.gibbs_order = cfg.gibbs_order;
  h.gibbs_count_sweeps = cfg.gibbs_count_sweeps;
  return h;
}

std::string serialize_chain_log(const ChainLogHeader& header, const std::vector<ChainRecord>& records,
                                const std::optional<ChainLogFooter>& footer) {
  std::string out = header_json(header).dump() + "\n";
  for (const auto& r : records) out += record_json(r).dump() + "\n";
  if (footer) out += footer_json(*footer).dump() + "\n";
  return out;
}

void write_chain_log(const std::filesystem::path& path, const ChainLogHeader& header, const ChainOutput& chain) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write chain log " + path.string());
  ChainLogFooter footer{chain.complete, chain.error, chain.accept_count, {}};
  out << serialize_chain_log(header, chain.records, footer);
  if (!out) throw Error("failed writing chain log " + path.string());
}

ChainLogFile parse_chain_log(const std::string& text, const std::optional<std::string>& expected_digest) {
  ChainLogFile log;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (!have_header) {
        if (type != "header") throw std::runtime_error("first line must be a header");
        log.header = header_from(j);
        have_header = true;
        if (log.header.version > kChainLogVersion) {
          log.warnings.push_back(fmt::format("log version {} is newer than {}", log.header.version, kChainLogVersion));
        }
      } else if (type == "record") {
        log.records.push_back(record_from(j));
      } else if (type == "footer") {
        log.footer = footer_from(j);
      } else {
        log.warnings.push_back(fmt::format("line {}: skipped entry of unknown type '{}'", number, type));
      }
    } catch (const std::exception& e) {
      log.error = LogIssue{number, e.what()};
      return log;
    }
  }
  if (!have_header) {
    log.error = LogIssue{std::max<std::size_t>(number, 1), "missing header"};
    return log;
  }
  if (expected_digest && *expected_digest != log.header.config_digest) {
    log.warnings.push_back(fmt::format("config digest {} differs from the supplied config ({})",
                                       log.header.config_digest, *expected_digest));
  }
  return log;
}

ChainLogFile read_chain_log(const std::filesystem::path& path, const std::optional<std::string>& expected_digest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open chain log " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_chain_log(buffer.str(), expected_digest);
}

void require_readable(const ChainLogFile& log) {
  if (log.error) throw LogError(log.error->line, log.error->message);
}

ChainOutput to_chain_output(const ChainLogFile& log) {
  ChainOutput out;
  out.object = log.header.object;
  out.object_index = log.header.object_index;
  out.method = log.header.method;
  out.chain_id = log.header.chain_id;
  out.records = log.records;
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    if (r.accepted) ++out.accept_count;
    const bool last_of_iteration = i + 1 == log.records.size() || log.records[i + 1].iteration != r.iteration;
    if (!last_of_iteration) continue;
    if (out.method == Method::DirectSampling && !r.accepted) continue;
    out.samples.push_back(r.result);
    out.sample_iterations.push_back(r.iteration);
  }
  if (log.footer) {
    out.complete = log.footer->complete && !log.error;
    out.error = log.footer->error;
  } else {
    out.complete = false;
    out.error = log.error ? fmt::format("line {}: {}", log.error->line, log.error->message) : "log has no footer";
  }
  return out;
}

std::vector<ReplayEntry> replay_entries(const ChainLogFile& log) {
  std::vector<ReplayEntry> entries;
  entries.reserve(log.records.size());
  for (const auto& r : log.records) entries.push_back({r.query, r.answer, r.raw_answer});
  return entries;
}

SamplerConfig sampler_config_from(const ChainLogHeader& header) {
  SamplerConfig cfg;
  cfg.method = header.method;
  cfg.iterations = header.iterations;
  cfg.chains = 1;
  cfg.proposal_variance = header.proposal_variance;
  cfg.uniform_jump_probability = header.uniform_jump_probability;
  cfg.gibbs_order = header.gibbs_order;
  cfg.gibbs_count_sweeps = header.gibbs_count_sweeps;
  cfg.master_seed = header.master_seed;
  return cfg;
}

std::vector<std::filesystem::path> list_chain_logs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

}  // namespace elicit
