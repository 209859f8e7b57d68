#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "elicit/samplers.hpp"

namespace elicit {

/// The six objects of the color study.
const std::vector<std::string>& default_objects();

/// Provides the respondent for one chain. Implementations may return the same
/// instance for every chain of an object when it is safe to share.
using RespondentFactory =
    std::function<std::shared_ptr<Respondent>(int object_index, const std::string& object, int chain_id)>;

struct ExperimentOptions {
  /// Chains of one object run concurrently up to this bound.
  int max_concurrent_chains = 1;
  /// Called once per chain in (object, chain) order after each object finishes.
  std::function<void(const ChainOutput&)> on_chain;
};

/// Runs cfg.chains chains of cfg.method for every object. Chain streams derive
/// from (master seed, object index, chain index); prompts use the lower-cased
/// object name. Failed chains come back flagged incomplete.
std::vector<ChainOutput> run_experiment(const std::vector<std::string>& objects, const SamplerConfig& cfg,
                                        const RespondentFactory& factory, const ExperimentOptions& options = {});

}  // namespace elicit
