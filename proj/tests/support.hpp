#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "elicit/respondent.hpp"
#include "elicit/target.hpp"

namespace elicit::testing {

/// Respondent driven by a callback; counts calls.
class ScriptedRespondent final : public Respondent {
 public:
  using Fn = std::function<Answer(const Query&, Rng&)>;
  explicit ScriptedRespondent(Fn fn) : fn_(std::move(fn)) {}

  Response answer(const Query& q, Rng& rng) override {
    ++calls;
    Answer a = fn_(q, rng);
    return {a, answer_text(a), 1};
  }
  std::string_view kind() const override { return "scripted"; }

  std::atomic<int> calls{0};

 private:
  Fn fn_;
};

inline TargetSpec single_gaussian(double h, double s, double l, double sh, double ss, double sl) {
  return TargetSpec{{GaussianComponent{1.0, {h, s, l}, {sh, ss, sl}}}};
}

/// Stddev small enough that every other lattice point has zero mass in double precision.
inline TargetSpec point_mass(const HslColor& c) { return single_gaussian(c.h, c.s, c.l, 0.01, 0.01, 0.01); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("elicit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Pearson chi-square p-value of counts against probabilities over the 1800
/// grid bins, pooling bins that expect fewer than 5 counts into one cell.
inline double grid_chi_square_p(std::span<const double> counts, std::span<const double> probabilities) {
  double n = 0.0;
  for (double c : counts) n += c;
  double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probabilities[i];
    if (e < 5.0) {
      pooled_obs += counts[i];
      pooled_exp += e;
      continue;
    }
    stat += (counts[i] - e) * (counts[i] - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  if (cells < 2) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

}  // namespace elicit::testing
