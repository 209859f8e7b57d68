#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elicit/diagnostics.hpp"

namespace elicit {

/// 1800 nonnegative reals in (i, j, k) order, separated by whitespace or
/// commas; '#' starts a comment. Normalized on load.
GridHistogram read_reference_histogram(const std::filesystem::path& path);
GridHistogram parse_reference_histogram(const std::string& text);
void write_reference_histogram(const std::filesystem::path& path, const GridHistogram& h);

/// Reference for every object: `path` may be a single file (used for all
/// objects) or a directory holding "<object>.txt" (lower-case name accepted).
/// Throws MissingReference when an object has none.
std::map<std::string, GridHistogram> load_references(const std::filesystem::path& path,
                                                     const std::vector<std::string>& objects);

/// Machine-readable table: one row per object, a (hellinger, mode) column pair per method.
std::string report_csv(const AlignmentReport& report);
/// Human-readable table with ".85 (4.0)" cells; '*' marks the per-row minimum.
std::string report_text(const AlignmentReport& report);
std::string progression_csv(const AlignmentReport& report);

/// Writes `path` (CSV) and `path` with extension ".txt".
void export_report(const AlignmentReport& report, const std::filesystem::path& path);

struct LabeledTrace {
  std::string object;
  Method method = Method::Mcmc;
  RhatTrace trace;
};

std::string rhat_csv(const std::vector<LabeledTrace>& traces);

/// Shortest round-trip text for a double ("inf", "nan" for non-finite values).
std::string format_full(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace elicit
