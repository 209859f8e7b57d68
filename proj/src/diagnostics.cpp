#include "elicit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "elicit/errors.hpp"

namespace elicit {

GelmanRubin gelman_rubin_from_moments(std::span<const double> means, std::span<const double> variances,
                                      std::size_t n) {
  const std::size_t m = means.size();
  if (m < 2 || variances.size() != m) throw InsufficientChains("R-hat needs at least 2 chains");
  if (n < 2) throw InsufficientChains("R-hat needs at least 2 samples per chain");

  const double within = std::accumulate(variances.begin(), variances.end(), 0.0) / static_cast<double>(m);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m);
  double between_over_n = 0.0;
  for (double mu : means) between_over_n += (mu - grand) * (mu - grand);
  between_over_n /= static_cast<double>(m - 1);

  if (within <= 0.0) {
    if (between_over_n <= 0.0) return {1.0, true};
    return {std::numeric_limits<double>::infinity(), true};
  }
  const double nn = static_cast<double>(n);
  const double pooled = (nn - 1.0) / nn * within + between_over_n;
  return {std::sqrt(pooled / within), false};
}

GelmanRubin gelman_rubin(std::span<const std::vector<double>> chains) {
  if (chains.size() < 2) throw InsufficientChains("R-hat needs at least 2 chains");
  const std::size_t n = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != n) throw std::invalid_argument("R-hat chains must have equal length");
  }
  if (n < 2) throw InsufficientChains("R-hat needs at least 2 samples per chain");
  std::vector<double> means, variances;
  for (const auto& c : chains) {
    const double mu = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : c) ss += (x - mu) * (x - mu);
    means.push_back(mu);
    variances.push_back(ss / static_cast<double>(n - 1));
  }
  return gelman_rubin_from_moments(means, variances, n);
}

namespace {

void check_chains(std::span<const std::vector<HslColor>> chains) {
  if (chains.size() < 2) {
    throw InsufficientChains(fmt::format("R-hat needs at least 2 chains, got {}", chains.size()));
  }
}

RhatPoint combine(std::size_t t, const std::array<GelmanRubin, 3>& dims) {
  RhatPoint p;
  p.t = t;
  p.value = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < 3; ++d) {
    p.per_dimension[d] = dims[d].rhat;
    p.value = std::max(p.value, dims[d].rhat);
    p.degenerate = p.degenerate || dims[d].degenerate;
  }
  return p;
}

}  // namespace

RhatPoint rhat_vector(std::span<const std::vector<HslColor>> chains, std::size_t t) {
  check_chains(chains);
  if (t < 2) throw InsufficientChains("R-hat needs at least 2 samples per chain");
  for (const auto& c : chains) {
    if (c.size() < t) throw std::invalid_argument("chain shorter than the requested prefix");
  }
  std::array<GelmanRubin, 3> dims;
  for (Dimension d : kAllDimensions) {
    std::vector<std::vector<double>> values;
    for (const auto& c : chains) {
      std::vector<double> v;
      v.reserve(t);
      for (std::size_t i = 0; i < t; ++i) v.push_back(c[i][d]);
      values.push_back(std::move(v));
    }
    dims[static_cast<std::size_t>(d)] = gelman_rubin(values);
  }
  return combine(t, dims);
}

RhatTrace rhat_trace(std::span<const std::vector<HslColor>> chains, std::size_t burn_in) {
  check_chains(chains);
  std::size_t length = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) length = std::min(length, c.size() > burn_in ? c.size() - burn_in : 0);
  RhatTrace trace;
  if (length < 2) return trace;

  // Integer coordinates keep running sums exact.
  const std::size_t m = chains.size();
  std::vector<std::array<double, 3>> sum(m), sumsq(m);
  std::vector<double> means(m), variances(m);
  trace.reserve(length - 1);
  for (std::size_t t = 1; t <= length; ++t) {
    for (std::size_t c = 0; c < m; ++c) {
      const HslColor& x = chains[c][burn_in + t - 1];
      for (Dimension d : kAllDimensions) {
        const auto k = static_cast<std::size_t>(d);
        sum[c][k] += x[d];
        sumsq[c][k] += static_cast<double>(x[d]) * x[d];
      }
    }
    if (t < 2) continue;
    const double n = static_cast<double>(t);
    std::array<GelmanRubin, 3> dims;
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t c = 0; c < m; ++c) {
        means[c] = sum[c][k] / n;
        variances[c] = std::max(0.0, (sumsq[c][k] - sum[c][k] * sum[c][k] / n) / (n - 1.0));
      }
      dims[k] = gelman_rubin_from_moments(means, variances, t);
    }
    trace.push_back(combine(t, dims));
  }
  return trace;
}

double hellinger(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw GridMismatch(fmt::format("histograms have {} and {} bins", p.size(), q.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    acc += d * d;
  }
  return std::min(1.0, std::sqrt(0.5 * acc));
}

double hellinger(const GridHistogram& p, const GridHistogram& q) { return hellinger(p.masses(), q.masses()); }

HslColor mode_of(const GridHistogram& h) {
  const auto masses = h.masses();
  const auto best = static_cast<std::size_t>(std::max_element(masses.begin(), masses.end()) - masses.begin());
  const BinIndex b = GridHistogram::unlinear(best);
  return {b.hue * GridHistogram::kHueWidth + GridHistogram::kHueWidth / 2,
          b.sat * GridHistogram::kSatWidth + GridHistogram::kSatWidth / 2,
          b.light * GridHistogram::kLightWidth + GridHistogram::kLightWidth / 2};
}

std::string_view hue_metric_name(HueMetric m) { return m == HueMetric::Linear ? "linear" : "circular"; }

double mode_distance(const HslColor& a, const HslColor& b, HueMetric metric) {
  double dh = std::abs(a.h - b.h);
  if (metric == HueMetric::Circular) dh = std::min(dh, 360.0 - dh);
  const double ds = a.s - b.s;
  const double dl = a.l - b.l;
  return std::sqrt(dh * dh + ds * ds + dl * dl);
}

const AlignmentCell* AlignmentReport::find(const std::string& object, Method method) const {
  for (const auto& c : cells) {
    if (c.object == object && c.method == method) return &c;
  }
  return nullptr;
}

namespace {

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
};

MeanSem mean_sem(const std::vector<double>& v) {
  MeanSem out;
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sem = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return out;
}

/// Samples produced at iterations in [burn_in, limit).
std::vector<HslColor> window(const ChainOutput& chain, std::size_t burn_in, int limit) {
  std::vector<HslColor> out;
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    const int it = chain.sample_iterations[i];
    if (it >= limit) break;
    if (static_cast<std::size_t>(it) >= burn_in) out.push_back(chain.samples[i]);
  }
  return out;
}

}  // namespace

AlignmentReport build_alignment_report(std::span<const ChainOutput> runs,
                                       const std::map<std::string, GridHistogram>& references,
                                       const AlignmentOptions& options) {
  AlignmentReport report;
  std::map<std::pair<std::string, Method>, std::vector<const ChainOutput*>> groups;
  for (const auto& run : runs) {
    if (std::find(report.objects.begin(), report.objects.end(), run.object) == report.objects.end()) {
      report.objects.push_back(run.object);
    }
    if (!references.contains(run.object)) {
      throw MissingReference(fmt::format("no reference histogram for object '{}'", run.object));
    }
    if (run.complete) groups[{run.object, run.method}].push_back(&run);
  }
  for (Method m : kAllMethods) {
    const bool present = std::any_of(runs.begin(), runs.end(), [m](const ChainOutput& r) { return r.method == m; });
    if (present) report.methods.push_back(m);
  }

  const int stride = std::max(1, options.progression_stride);
  for (const auto& object : report.objects) {
    const GridHistogram& reference = references.at(object);
    const HslColor reference_mode = mode_of(reference);
    for (Method method : report.methods) {
      const auto it = groups.find({object, method});
      AlignmentCell cell{object, method, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN(), 0};
      if (it == groups.end()) {
        report.cells.push_back(cell);
        continue;
      }
      const auto& chains = it->second;

      auto metrics_at = [&](int limit, std::vector<double>& hs, std::vector<double>& ms) {
        for (const ChainOutput* chain : chains) {
          const auto samples = window(*chain, options.burn_in, limit);
          if (samples.empty()) continue;
          const GridHistogram h = histogram(samples);
          hs.push_back(hellinger(h, reference));
          ms.push_back(mode_distance(mode_of(h), reference_mode, options.hue_metric));
        }
      };

      std::vector<double> hs, ms;
      metrics_at(std::numeric_limits<int>::max(), hs, ms);
      cell.repetitions = static_cast<int>(hs.size());
      if (!hs.empty()) {
        cell.hellinger = mean_sem(hs).mean;
        cell.mode_distance = mean_sem(ms).mean;
      }
      report.cells.push_back(cell);

      int total_iterations = 0;
      for (const ChainOutput* chain : chains) {
        if (!chain->records.empty()) total_iterations = std::max(total_iterations, chain->records.back().iteration + 1);
      }
      auto& curve = report.progression[{object, method}];
      for (int limit = stride;; limit += stride) {
        const int capped = std::min(limit, total_iterations);
        std::vector<double> ph, pm;
        metrics_at(capped, ph, pm);
        if (!ph.empty()) {
          const auto h = mean_sem(ph);
          const auto md = mean_sem(pm);
          curve.push_back({capped, static_cast<int>(ph.size()), h.mean, h.sem, md.mean, md.sem});
        }
        if (capped >= total_iterations) break;
      }
    }
  }
  return report;
}

}  // namespace elicit
