#include "elicit/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "elicit/errors.hpp"
#include "elicit/experiment.hpp"

namespace elicit {

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join_path(path, key), "unknown key");
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "invalid value");
  }
}

template <class T>
void read_if(const YAML::Node& parent, const std::string& parent_path, const char* key, T& out) {
  if (const auto n = parent[key]) out = scalar<T>(n, join_path(parent_path, key));
}

Method method_from(const std::string& text, const std::string& path) {
  if (auto m = parse_method(text)) return *m;
  std::vector<std::string_view> names;
  for (Method m : kAllMethods) names.push_back(method_name(m));
  throw ConfigError(path, fmt::format("unknown method '{}'; valid methods are {}", text, fmt::join(names, ", ")));
}

std::array<double, 3> triple(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() != 3) throw ConfigError(path, "expected a list of three numbers");
  return {scalar<double>(node[0], path + "[0]"), scalar<double>(node[1], path + "[1]"),
          scalar<double>(node[2], path + "[2]")};
}

TargetSpec parse_target(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"components"});
  const auto comps = node["components"];
  if (!comps || !comps.IsSequence() || comps.size() == 0) {
    throw ConfigError(join_path(path, "components"), "missing required field");
  }
  TargetSpec spec;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cpath = fmt::format("{}.components[{}]", path, i);
    check_keys(comps[i], cpath, {"weight", "mean", "stddev"});
    GaussianComponent c;
    read_if(comps[i], cpath, "weight", c.weight);
    if (!comps[i]["mean"]) throw ConfigError(cpath + ".mean", "missing required field");
    if (!comps[i]["stddev"]) throw ConfigError(cpath + ".stddev", "missing required field");
    c.mean = triple(comps[i]["mean"], cpath + ".mean");
    c.stddev = triple(comps[i]["stddev"], cpath + ".stddev");
    spec.components.push_back(c);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return spec;
}

void parse_sampler(const YAML::Node& node, RunConfig& cfg) {
  const std::string path = "sampler";
  check_keys(node, path,
             {"iterations", "chains", "proposal_variance", "uniform_jump_probability", "gibbs_order",
              "gibbs_count_sweeps", "seed", "max_concurrent_chains", "transport_retries", "transport_backoff_ms"});
  auto& s = cfg.sampler;
  read_if(node, path, "iterations", s.iterations);
  read_if(node, path, "chains", s.chains);
  read_if(node, path, "proposal_variance", s.proposal_variance);
  read_if(node, path, "uniform_jump_probability", s.uniform_jump_probability);
  read_if(node, path, "gibbs_count_sweeps", s.gibbs_count_sweeps);
  read_if(node, path, "seed", s.master_seed);
  read_if(node, path, "max_concurrent_chains", cfg.max_concurrent_chains);
  read_if(node, path, "transport_retries", s.transport_retries);
  if (const auto n = node["transport_backoff_ms"]) {
    s.transport_backoff = std::chrono::milliseconds(scalar<long>(n, "sampler.transport_backoff_ms"));
  }
  if (const auto order = node["gibbs_order"]) {
    if (!order.IsSequence()) throw ConfigError("sampler.gibbs_order", "expected a list of dimensions");
    s.gibbs_order.clear();
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto text = scalar<std::string>(order[i], "sampler.gibbs_order");
      const auto d = parse_dimension(text);
      if (!d) throw ConfigError("sampler.gibbs_order", "unknown dimension '" + text + "'");
      s.gibbs_order.push_back(*d);
    }
  }
}

void parse_respondent(const YAML::Node& node, RunConfig& cfg) {
  const std::string path = "respondent";
  check_keys(node, path,
             {"kind", "endpoint", "model", "api_key_env", "temperature", "max_retries", "timeout_ms",
              "max_concurrent_requests", "seed", "match_rule", "match_threshold", "replay_logs"});
  auto& r = cfg.respondent;
  if (const auto n = node["kind"]) {
    const auto text = scalar<std::string>(n, "respondent.kind");
    const auto kind = parse_respondent_kind(text);
    if (!kind) throw ConfigError("respondent.kind", "unknown kind '" + text + "'; valid kinds are oracle, llm, replay");
    r.kind = *kind;
  }
  read_if(node, path, "endpoint", r.endpoint);
  read_if(node, path, "model", r.model);
  read_if(node, path, "api_key_env", r.api_key_env);
  read_if(node, path, "temperature", r.temperature);
  read_if(node, path, "max_retries", r.max_retries);
  read_if(node, path, "max_concurrent_requests", r.max_concurrent_requests);
  read_if(node, path, "seed", r.seed);
  read_if(node, path, "match_threshold", r.match_threshold);
  if (const auto n = node["timeout_ms"]) r.timeout = std::chrono::milliseconds(scalar<long>(n, "respondent.timeout_ms"));
  if (const auto n = node["match_rule"]) {
    const auto text = scalar<std::string>(n, "respondent.match_rule");
    if (text == "graded") {
      r.match_rule = MatchRule::Graded;
    } else if (text == "threshold") {
      r.match_rule = MatchRule::Threshold;
    } else {
      throw ConfigError("respondent.match_rule", "expected 'graded' or 'threshold'");
    }
  }
  if (const auto n = node["replay_logs"]) cfg.replay_logs = scalar<std::string>(n, "respondent.replay_logs");
}

}  // namespace

void RunConfig::validate() const {
  if (objects.empty()) throw ConfigError("objects", "at least one object is required");
  for (const auto& o : objects) {
    if (o.empty()) throw ConfigError("objects", "object names must be nonempty");
  }
  if (methods.empty()) throw ConfigError("methods", "at least one method is required");
  try {
    sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sampler", e.what());
  }
  if (max_concurrent_chains < 1) throw ConfigError("sampler.max_concurrent_chains", "must be >= 1");
  if (respondent.temperature < 0) throw ConfigError("respondent.temperature", "must be >= 0");
  if (respondent.max_retries < 0) throw ConfigError("respondent.max_retries", "must be >= 0");
  if (respondent.max_concurrent_requests < 1) throw ConfigError("respondent.max_concurrent_requests", "must be >= 1");
  switch (respondent.kind) {
    case RespondentKind::Oracle:
      for (const auto& o : objects) {
        if (!target && !object_targets.contains(o)) {
          throw ConfigError("target", "oracle mode requires a target (missing for object '" + o + "')");
        }
      }
      break;
    case RespondentKind::Llm:
      if (respondent.endpoint.empty()) throw ConfigError("respondent.endpoint", "llm mode requires an endpoint");
      if (respondent.model.empty()) throw ConfigError("respondent.model", "llm mode requires a model");
      break;
    case RespondentKind::Replay:
      if (!replay_logs) throw ConfigError("respondent.replay_logs", "replay mode requires a log directory");
      break;
  }
}

const TargetSpec& RunConfig::target_for(const std::string& object) const {
  if (const auto it = object_targets.find(object); it != object_targets.end()) return it->second;
  if (target) return *target;
  throw ConfigError("target", "no target for object '" + object + "'");
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("invalid YAML: ") + e.what());
  }
  RunConfig cfg;
  cfg.objects = default_objects();
  cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  check_keys(root, "", {"objects", "method", "methods", "sampler", "respondent", "target", "targets", "output"});

  if (const auto n = root["objects"]) {
    if (!n.IsSequence()) throw ConfigError("objects", "expected a list of object names");
    cfg.objects.clear();
    for (std::size_t i = 0; i < n.size(); ++i) cfg.objects.push_back(scalar<std::string>(n[i], "objects"));
  }
  if (root["method"] && root["methods"]) throw ConfigError("method", "give either 'method' or 'methods', not both");
  if (const auto n = root["method"]) {
    const auto text = scalar<std::string>(n, "method");
    if (text != "all") cfg.methods = {method_from(text, "method")};
  }
  if (const auto n = root["methods"]) {
    if (!n.IsSequence()) throw ConfigError("methods", "expected a list of method names");
    cfg.methods.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      cfg.methods.push_back(method_from(scalar<std::string>(n[i], "methods"), "methods"));
    }
  }
  if (const auto n = root["sampler"]) parse_sampler(n, cfg);
  if (const auto n = root["respondent"]) parse_respondent(n, cfg);
  if (const auto n = root["target"]) cfg.target = parse_target(n, "target");
  if (const auto n = root["targets"]) {
    if (!n.IsMap()) throw ConfigError("targets", "expected a mapping from object name to target");
    for (const auto& kv : n) {
      const auto object = kv.first.as<std::string>();
      cfg.object_targets.emplace(object, parse_target(kv.second, "targets." + object));
    }
  }
  if (const auto n = root["output"]) {
    check_keys(n, "output", {"directory", "reference"});
    if (const auto d = n["directory"]) cfg.output_dir = scalar<std::string>(d, "output.directory");
    if (const auto r = n["reference"]) cfg.reference_path = scalar<std::string>(r, "output.reference");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_config_json(const RunConfig& cfg) {
  using nlohmann::json;
  auto target_json = [](const TargetSpec& t) {
    json comps = json::array();
    for (const auto& c : t.components) comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
    return json{{"components", comps}};
  };
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  json order = json::array();
  for (Dimension d : cfg.sampler.gibbs_order) order.push_back(dimension_name(d));
  json j;
  j["objects"] = cfg.objects;
  j["methods"] = methods;
  j["sampler"] = {{"iterations", cfg.sampler.iterations},
                  {"chains", cfg.sampler.chains},
                  {"proposal_variance", cfg.sampler.proposal_variance},
                  {"uniform_jump_probability", cfg.sampler.uniform_jump_probability},
                  {"gibbs_order", order},
                  {"gibbs_count_sweeps", cfg.sampler.gibbs_count_sweeps},
                  {"seed", cfg.sampler.master_seed}};
  const auto& r = cfg.respondent;
  j["respondent"] = {{"kind", respondent_kind_name(r.kind)},
                     {"endpoint", r.endpoint},
                     {"model", r.model},
                     {"temperature", r.temperature},
                     {"max_retries", r.max_retries},
                     {"match_rule", r.match_rule == MatchRule::Graded ? "graded" : "threshold"},
                     {"match_threshold", r.match_threshold}};
  if (cfg.target) j["target"] = target_json(*cfg.target);
  json targets = json::object();
  for (const auto& [object, t] : cfg.object_targets) targets[object] = target_json(t);
  j["targets"] = targets;
  return j.dump();
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = canonical_config_json(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace elicit
