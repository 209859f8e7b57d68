#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/color.hpp"
#include "elicit/query.hpp"
#include "elicit/respondent.hpp"
#include "elicit/rng.hpp"

namespace elicit {

enum class Method { DirectPrompting, DirectSampling, Mcmc, Gibbs };

inline constexpr std::array<Method, 4> kAllMethods = {Method::DirectPrompting, Method::DirectSampling,
                                                     Method::Mcmc, Method::Gibbs};

std::string_view method_name(Method m);  // "direct_prompting", ...
std::optional<Method> parse_method(std::string_view text);

enum class ProposalKind { None, Gaussian, Uniform };
std::string_view proposal_kind_name(ProposalKind k);
std::optional<ProposalKind> parse_proposal_kind(std::string_view text);

struct SamplerConfig {
  Method method = Method::Mcmc;
  int iterations = 500;
  int chains = 4;
  /// Per-dimension variance of the Gaussian proposal (covariance = variance * I).
  double proposal_variance = 30.0;
  double uniform_jump_probability = 0.1;
  std::vector<Dimension> gibbs_order{Dimension::Hue, Dimension::Saturation, Dimension::Lightness};
  /// When set, one Gibbs iteration is a full sweep over `gibbs_order`.
  bool gibbs_count_sweeps = false;
  std::uint64_t master_seed = 0;
  /// Extra attempts after a TransportError before the chain is abandoned.
  int transport_retries = 2;
  std::chrono::milliseconds transport_backoff{1000};
  /// Wall-clock timestamps make logs non-reproducible; off for synthetic runs.
  bool record_timestamps = false;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Provenance of a single iteration.
struct ChainRecord {
  int chain_id = 0;
  int iteration = 0;
  Method method = Method::Mcmc;
  HslColor current;
  std::optional<HslColor> proposal;
  ProposalKind proposal_kind = ProposalKind::None;
  /// Pairwise only: the candidate was shown as Option A.
  std::optional<bool> candidate_first;
  Query query;
  std::string prompt;
  std::string raw_answer;
  Answer answer;
  int attempts = 1;
  HslColor result;
  /// MCMC: candidate chosen. Direct sampling: color retained.
  bool accepted = false;
  /// Gibbs: the filled value was outside its range and was wrapped/clamped.
  bool fill_canonicalized = false;
  std::optional<std::string> timestamp;
  /// Fields written by other versions, kept verbatim as serialized JSON.
  std::map<std::string, std::string> extra;

  friend bool operator==(const ChainRecord&, const ChainRecord&) = default;
};

struct ChainOutput {
  std::string object;
  int object_index = 0;
  Method method = Method::Mcmc;
  int chain_id = 0;
  std::vector<HslColor> samples;
  /// Iteration that produced each sample.
  std::vector<int> sample_iterations;
  std::vector<ChainRecord> records;
  int accept_count = 0;
  bool complete = true;
  std::string error;
};

HslColor init_state(Rng& rng);

/// Raw (pre-canonicalization) Gaussian step with covariance variance * I.
std::array<double, 3> gaussian_offset(Rng& rng, double variance);

struct Proposal {
  HslColor candidate;
  ProposalKind kind = ProposalKind::Gaussian;
};

/// With probability `jump_probability` a uniform lattice draw, otherwise a
/// canonicalized Gaussian step around `current`.
Proposal propose(const HslColor& current, Rng& rng, double variance = 30.0, double jump_probability = 0.1);

using Proposer = std::function<Proposal(const HslColor&, Rng&)>;

/// Per-chain state: identity and the two random streams.
struct ChainContext {
  std::string object;
  /// Object text placed in queries; `object` when empty.
  std::string prompt_object;
  int object_index = 0;
  int chain_id = 0;
  Rng sampler_rng;
  Rng respondent_rng;
  /// Start state; drawn with init_state when unset.
  std::optional<HslColor> initial;
  /// Replaces the default proposal (MCMC only).
  Proposer proposer;
};

ChainContext make_chain_context(std::string object, int object_index, int chain_id, std::uint64_t master_seed);

ChainOutput run_mcmc(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx);
ChainOutput run_gibbs(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx);
ChainOutput run_direct_sampling(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx);
ChainOutput run_direct_prompting(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx);

/// Dispatches on cfg.method.
ChainOutput run_chain(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx);

}  // namespace elicit
