#include "elicit/report_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "elicit/errors.hpp"

namespace elicit {

std::string format_full(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

GridHistogram parse_reference_histogram(const std::string& text) {
  std::vector<double> values;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw Error("reference histogram: bad number '" + token + "'");
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error("reference histogram: values must be finite and >= 0");
      values.push_back(v);
    }
  }
  return GridHistogram::from_weights(values);
}

GridHistogram read_reference_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingReference("cannot open reference histogram " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_reference_histogram(buffer.str());
}

void write_reference_histogram(const std::filesystem::path& path, const GridHistogram& h) {
  std::string text = "# 18x10x10 hue-saturation-lightness grid, (i, j, k) order\n";
  for (std::size_t i = 0; i < GridHistogram::kBinCount; ++i) {
    text += format_full(h[i]);
    text += (i + 1) % GridHistogram::kLightBins == 0 ? '\n' : ' ';
  }
  write_text_file(path, text);
}

std::map<std::string, GridHistogram> load_references(const std::filesystem::path& path,
                                                     const std::vector<std::string>& objects) {
  std::map<std::string, GridHistogram> refs;
  if (!std::filesystem::exists(path)) throw MissingReference("reference path does not exist: " + path.string());
  if (!std::filesystem::is_directory(path)) {
    const GridHistogram h = read_reference_histogram(path);
    for (const auto& o : objects) refs.emplace(o, h);
    return refs;
  }
  for (const auto& o : objects) {
    std::string lower = o;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (const auto& name : {o + ".txt", lower + ".txt"}) {
      if (std::filesystem::exists(path / name)) {
        refs.emplace(o, read_reference_histogram(path / name));
        break;
      }
    }
    if (!refs.contains(o)) throw MissingReference("no reference histogram for '" + o + "' in " + path.string());
  }
  return refs;
}

std::string report_csv(const AlignmentReport& report) {
  std::string out = "object";
  for (Method m : report.methods) out += fmt::format(",{0}_hellinger,{0}_mode_distance", method_name(m));
  out += '\n';
  for (const auto& object : report.objects) {
    out += object;
    for (Method m : report.methods) {
      const auto* cell = report.find(object, m);
      out += fmt::format(",{},{}", format_full(cell ? cell->hellinger : NAN), format_full(cell ? cell->mode_distance : NAN));
    }
    out += '\n';
  }
  return out;
}

namespace {

/// ".85" style: two decimals, leading zero dropped.
std::string table_hellinger(double v) {
  if (std::isnan(v)) return "-";
  std::string s = fmt::format("{:.2f}", v);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string table_mode(double v) { return std::isnan(v) ? "-" : fmt::format("{:.1f}", v); }

}  // namespace

std::string report_text(const AlignmentReport& report) {
  const bool mark = report.methods.size() > 1;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"object"};
  for (Method m : report.methods) head.emplace_back(method_name(m));
  rows.push_back(head);
  for (const auto& object : report.objects) {
    double best_h = INFINITY, best_m = INFINITY;
    for (Method m : report.methods) {
      if (const auto* c = report.find(object, m)) {
        if (!std::isnan(c->hellinger)) best_h = std::min(best_h, c->hellinger);
        if (!std::isnan(c->mode_distance)) best_m = std::min(best_m, c->mode_distance);
      }
    }
    std::vector<std::string> row{object};
    for (Method m : report.methods) {
      const auto* c = report.find(object, m);
      const double h = c ? c->hellinger : NAN;
      const double md = c ? c->mode_distance : NAN;
      std::string cell = table_hellinger(h);
      if (mark && h == best_h) cell += "*";
      cell += " (" + table_mode(md);
      if (mark && md == best_m) cell += "*";
      cell += ")";
      row.push_back(cell);
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> widths(head.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += i == 0 ? fmt::format("{:<{}}", row[i], widths[i]) : fmt::format("  {:>{}}", row[i], widths[i]);
    }
    out += '\n';
  }
  out += "Hellinger distance (mode distance); lower is closer.";
  if (mark) out += " * marks the row minimum.";
  out += '\n';
  return out;
}

std::string progression_csv(const AlignmentReport& report) {
  std::string out = "object,method,iterations,chains,hellinger_mean,hellinger_sem,mode_mean,mode_sem\n";
  for (const auto& object : report.objects) {
    for (Method m : report.methods) {
      const auto it = report.progression.find({object, m});
      if (it == report.progression.end()) continue;
      for (const auto& p : it->second) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", object, method_name(m), p.iterations, p.chains,
                           format_full(p.hellinger_mean), format_full(p.hellinger_sem), format_full(p.mode_mean),
                           format_full(p.mode_sem));
      }
    }
  }
  return out;
}

void export_report(const AlignmentReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_csv(report));
  auto text_path = path;
  text_path.replace_extension(".txt");
  write_text_file(text_path, report_text(report));
}

std::string rhat_csv(const std::vector<LabeledTrace>& traces) {
  std::string out = "object,method,t,rhat,rhat_hue,rhat_saturation,rhat_lightness,degenerate\n";
  for (const auto& lt : traces) {
    for (const auto& p : lt.trace) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", lt.object, method_name(lt.method), p.t, format_full(p.value),
                         format_full(p.per_dimension[0]), format_full(p.per_dimension[1]),
                         format_full(p.per_dimension[2]), p.degenerate ? 1 : 0);
    }
  }
  return out;
}

}  // namespace elicit
