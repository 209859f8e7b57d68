#pragma once

#include <cstdint>
#include <random>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace elicit {

// The engine's output sequence is fixed by the standard; the Boost
// distributions are fixed by Boost, so a seed reproduces across toolchains.
using Rng = std::mt19937_64;

enum class Stream : std::uint32_t { Sampler = 0, Respondent = 1 };

/// Independent stream for one chain of one object.
inline Rng derive_stream(std::uint64_t master_seed, std::uint32_t object_index,
                         std::uint32_t chain_index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32), object_index, chain_index,
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return boost::random::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform01(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return boost::random::bernoulli_distribution<double>(p)(rng);
}

inline double normal(Rng& rng, double mean, double stddev) {
  return boost::random::normal_distribution<double>(mean, stddev)(rng);
}

}  // namespace elicit
