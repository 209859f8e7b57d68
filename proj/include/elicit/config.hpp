#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elicit/respondent.hpp"
#include "elicit/samplers.hpp"
#include "elicit/target.hpp"

namespace elicit {

/// Everything needed to run an experiment, as loaded from a YAML file.
struct RunConfig {
  std::vector<std::string> objects;
  std::vector<Method> methods;
  SamplerConfig sampler;
  RespondentConfig respondent;
  /// Oracle target shared by every object without its own entry in `object_targets`.
  std::optional<TargetSpec> target;
  std::map<std::string, TargetSpec> object_targets;
  int max_concurrent_chains = 1;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> reference_path;
  /// Replay mode: directory of chain logs to answer from.
  std::optional<std::filesystem::path> replay_logs;

  /// Throws ConfigError for mode/field mismatches.
  void validate() const;
  /// Target used by the oracle for `object`. Throws ConfigError when absent.
  const TargetSpec& target_for(const std::string& object) const;
};

/// Parses YAML text, fills defaults (all six objects, all four methods,
/// 500 iterations, 4 chains, temperature 1.0, uniform jump 0.1) and validates.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form of the settings that shape the samples (output
/// locations excluded).
std::string canonical_config_json(const RunConfig& cfg);
/// SHA-256 hex digest of canonical_config_json.
std::string config_digest(const RunConfig& cfg);

}  // namespace elicit
