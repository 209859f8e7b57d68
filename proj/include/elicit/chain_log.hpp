#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elicit/replay.hpp"
#include "elicit/samplers.hpp"

namespace elicit {

inline constexpr int kChainLogVersion = 1;

struct ChainLogHeader {
  int version = kChainLogVersion;
  std::string config_digest;
  std::uint64_t master_seed = 0;
  std::string object;
  int object_index = 0;
  Method method = Method::Mcmc;
  int chain_id = 0;
  std::string respondent;
  /// Sampler settings needed to re-run the chain against a replay respondent.
  int iterations = 0;
  double proposal_variance = 30.0;
  double uniform_jump_probability = 0.1;
  std::vector<Dimension> gibbs_order{Dimension::Hue, Dimension::Saturation, Dimension::Lightness};
  bool gibbs_count_sweeps = false;
  std::map<std::string, std::string> extra;

  friend bool operator==(const ChainLogHeader&, const ChainLogHeader&) = default;
};

struct ChainLogFooter {
  bool complete = true;
  std::string error;
  int accept_count = 0;
  std::map<std::string, std::string> extra;

  friend bool operator==(const ChainLogFooter&, const ChainLogFooter&) = default;
};

struct LogIssue {
  std::size_t line = 0;
  std::string message;
};

/// One chain: header line, one line per record, footer line when the chain
/// finished (successfully or not).
struct ChainLogFile {
  ChainLogHeader header;
  std::vector<ChainRecord> records;
  std::optional<ChainLogFooter> footer;
  /// First unreadable line; records before it are kept.
  std::optional<LogIssue> error;
  std::vector<std::string> warnings;
};

ChainLogHeader make_header(const ChainOutput& chain, const SamplerConfig& cfg, std::string config_digest,
                           std::string respondent_kind);

std::string serialize_chain_log(const ChainLogHeader& header, const std::vector<ChainRecord>& records,
                                const std::optional<ChainLogFooter>& footer);
void write_chain_log(const std::filesystem::path& path, const ChainLogHeader& header, const ChainOutput& chain);

/// Reads a log. Parse failures are reported in `error` rather than thrown;
/// a digest differing from `expected_digest` adds a warning.
ChainLogFile parse_chain_log(const std::string& text, const std::optional<std::string>& expected_digest = {});
ChainLogFile read_chain_log(const std::filesystem::path& path,
                            const std::optional<std::string>& expected_digest = {});

/// Throws LogError when the file carries a parse error.
void require_readable(const ChainLogFile& log);

/// Rebuilds samples and counters from the records.
ChainOutput to_chain_output(const ChainLogFile& log);

std::vector<ReplayEntry> replay_entries(const ChainLogFile& log);

/// Sampler configuration recorded in the header.
SamplerConfig sampler_config_from(const ChainLogHeader& header);

/// Every *.jsonl file in `dir`, sorted by name.
std::vector<std::filesystem::path> list_chain_logs(const std::filesystem::path& dir);

}  // namespace elicit
