#include "elicit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "elicit/chain_log.hpp"
#include "elicit/config.hpp"
#include "elicit/diagnostics.hpp"
#include "elicit/errors.hpp"
#include "elicit/experiment.hpp"
#include "elicit/llm_client.hpp"
#include "elicit/oracle.hpp"
#include "elicit/render.hpp"
#include "elicit/replay.hpp"
#include "elicit/report_io.hpp"

namespace elicit {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> methods;
  std::vector<std::string> objects;
  std::string reference;
  std::string hue_metric = "linear";
  std::size_t burn_in = 0;
  std::string logs;
  bool no_figures = false;
};

std::string slug(const std::string& text) {
  std::string out;
  for (unsigned char ch : text) out += std::isalnum(ch) ? static_cast<char>(std::tolower(ch)) : '_';
  return out;
}

fs::path log_path(const fs::path& dir, const ChainOutput& chain) {
  return dir / fmt::format("{}_{}_chain{}.jsonl", slug(chain.object), method_name(chain.method), chain.chain_id);
}

HueMetric hue_metric_from(const std::string& text) {
  return text == "circular" ? HueMetric::Circular : HueMetric::Linear;
}

using Group = std::map<std::pair<std::string, Method>, std::vector<const ChainOutput*>>;

/// Groups complete chains by (object, method), preserving first-seen object order.
Group group_chains(const std::vector<ChainOutput>& chains, std::vector<std::string>& object_order) {
  Group groups;
  for (const auto& c : chains) {
    if (std::find(object_order.begin(), object_order.end(), c.object) == object_order.end()) {
      object_order.push_back(c.object);
    }
    if (c.complete) groups[{c.object, c.method}].push_back(&c);
  }
  return groups;
}

std::vector<std::vector<HslColor>> samples_of(const std::vector<const ChainOutput*>& chains) {
  std::vector<std::vector<HslColor>> out;
  for (const auto* c : chains) out.push_back(c->samples);
  return out;
}

std::vector<LabeledTrace> compute_traces(const std::vector<ChainOutput>& chains, std::size_t burn_in,
                                         bool require_two, std::ostream& out) {
  std::vector<std::string> order;
  const Group groups = group_chains(chains, order);
  std::vector<LabeledTrace> traces;
  for (const auto& object : order) {
    for (Method m : {Method::Mcmc, Method::Gibbs}) {
      const auto it = groups.find({object, m});
      if (it == groups.end()) continue;
      if (it->second.size() < 2) {
        if (require_two) {
          throw InsufficientChains(fmt::format("R-hat for {} / {} needs at least 2 complete chains, found {}",
                                               object, method_name(m), it->second.size()));
        }
        continue;
      }
      const auto samples = samples_of(it->second);
      LabeledTrace lt{object, m, rhat_trace(samples, burn_in)};
      if (lt.trace.empty()) {
        out << fmt::format("{:<12} {:<16} R-hat undefined (fewer than 2 samples per chain)\n", object, method_name(m));
      } else {
        const auto& last = lt.trace.back();
        out << fmt::format("{:<12} {:<16} final R-hat {:.4f} at t={}{}\n", object, method_name(m), last.value, last.t,
                           last.value <= 1.1 ? " (converged)" : "");
      }
      traces.push_back(std::move(lt));
    }
  }
  return traces;
}

void render_figures(const std::vector<ChainOutput>& chains, const std::vector<LabeledTrace>& traces,
                    const fs::path& dir) {
  std::vector<std::string> order;
  const Group groups = group_chains(chains, order);
  for (const auto& [key, group] : groups) {
    const auto& [object, method] = key;
    const std::string stem = slug(object) + "_" + std::string(method_name(method));
    auto samples = samples_of(group);
    if (std::any_of(samples.begin(), samples.end(), [](const auto& s) { return !s.empty(); })) {
      render_color_strip(samples, dir / (stem + "_strip.png"), {2, 24});
    }
    std::vector<HslColor> pooled;
    for (const auto& s : samples) pooled.insert(pooled.end(), s.begin(), s.end());
    if (!pooled.empty()) {
      render_scatter_kde(pooled, {Dimension::Hue, Dimension::Saturation}, dir / (stem + "_scatter_hs.png"));
      render_scatter_kde(pooled, {Dimension::Hue, Dimension::Lightness}, dir / (stem + "_scatter_hl.png"));
    }
  }
  for (const auto& lt : traces) {
    if (lt.trace.empty()) continue;
    render_rhat_trace({lt.trace}, dir / (slug(lt.object) + "_" + std::string(method_name(lt.method)) + "_rhat.png"));
  }
}

std::vector<ChainOutput> load_logs(const fs::path& dir, const std::optional<std::string>& digest, std::ostream& err) {
  std::vector<ChainOutput> chains;
  for (const auto& path : list_chain_logs(dir)) {
    const ChainLogFile log = read_chain_log(path, digest);
    for (const auto& w : log.warnings) err << "warning: " << path.string() << ": " << w << "\n";
    if (log.error) {
      err << "warning: " << path.string() << ": line " << log.error->line << ": " << log.error->message
          << " (chain treated as incomplete)\n";
    }
    chains.push_back(to_chain_output(log));
  }
  if (chains.empty()) throw Error("no chain logs (*.jsonl) found in " + dir.string());
  std::stable_sort(chains.begin(), chains.end(), [](const ChainOutput& a, const ChainOutput& b) {
    return std::tie(a.object_index, a.method, a.chain_id) < std::tie(b.object_index, b.method, b.chain_id);
  });
  return chains;
}

void write_report(const AlignmentReport& report, const fs::path& dir, std::ostream& out) {
  export_report(report, dir / "report.csv");
  write_text_file(dir / "progression.csv", progression_csv(report));
  out << report_text(report);
}

RespondentFactory make_factory(const RunConfig& cfg, Method method, std::shared_ptr<LlmRespondent>& llm,
                               const std::vector<ChainLogFile>& replay_logs) {
  switch (cfg.respondent.kind) {
    case RespondentKind::Oracle: {
      auto cache = std::make_shared<std::pair<int, std::shared_ptr<OracleRespondent>>>(-1, nullptr);
      return [&cfg, cache](int object_index, const std::string& object, int) -> std::shared_ptr<Respondent> {
        if (cache->first != object_index) {
          cache->second.reset();
          auto target = std::make_shared<MixtureTarget>(cfg.target_for(object));
          cache->second = std::make_shared<OracleRespondent>(target, cfg.respondent.match_rule,
                                                             cfg.respondent.match_threshold);
          cache->first = object_index;
        }
        return cache->second;
      };
    }
    case RespondentKind::Llm:
      if (!llm) llm = std::make_shared<LlmRespondent>(cfg.respondent);
      return [llm](int, const std::string&, int) -> std::shared_ptr<Respondent> { return llm; };
    case RespondentKind::Replay:
      return [&replay_logs, method](int, const std::string& object, int chain_id) -> std::shared_ptr<Respondent> {
        for (const auto& log : replay_logs) {
          if (log.header.object == object && log.header.method == method && log.header.chain_id == chain_id) {
            return std::make_shared<ReplayRespondent>(replay_entries(log));
          }
        }
        throw ReplayExhausted(fmt::format("no replay log for {} / {} chain {}", object, method_name(method), chain_id));
      };
  }
  throw std::logic_error("unhandled respondent kind");
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.sampler.master_seed = *opt.seed;
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (!opt.objects.empty()) cfg.objects = opt.objects;
  if (!opt.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : opt.methods) {
      if (m == "all") {
        cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
        continue;
      }
      const auto parsed = parse_method(m);
      if (!parsed) throw ConfigError("method", "unknown method '" + m + "'");
      cfg.methods.push_back(*parsed);
    }
  }
  if (!opt.reference.empty()) cfg.reference_path = opt.reference;
  cfg.validate();
  cfg.sampler.record_timestamps = cfg.respondent.kind == RespondentKind::Llm;

  std::vector<ChainLogFile> replay_logs;
  if (cfg.respondent.kind == RespondentKind::Replay) {
    for (const auto& path : list_chain_logs(*cfg.replay_logs)) {
      replay_logs.push_back(read_chain_log(path));
      require_readable(replay_logs.back());
    }
    if (replay_logs.empty()) throw Error("no chain logs found in " + cfg.replay_logs->string());
    if (replay_logs.front().header.master_seed != cfg.sampler.master_seed) {
      err << "note: using the recorded master seed " << replay_logs.front().header.master_seed << " for replay\n";
      cfg.sampler.master_seed = replay_logs.front().header.master_seed;
    }
  }

  const std::string digest = config_digest(cfg);
  const fs::path logs_dir = cfg.output_dir / "logs";
  std::shared_ptr<LlmRespondent> llm;
  std::vector<ChainOutput> all;
  for (Method method : cfg.methods) {
    SamplerConfig sampler = cfg.sampler;
    sampler.method = method;
    ExperimentOptions options;
    options.max_concurrent_chains = cfg.max_concurrent_chains;
    options.on_chain = [&](const ChainOutput& chain) {
      write_chain_log(log_path(logs_dir, chain),
                      make_header(chain, sampler, digest, std::string(respondent_kind_name(cfg.respondent.kind))),
                      chain);
      if (!chain.complete) {
        err << fmt::format("warning: {} / {} chain {} incomplete: {}\n", chain.object, method_name(method),
                           chain.chain_id, chain.error);
      }
    };
    auto chains = run_experiment(cfg.objects, sampler, make_factory(cfg, method, llm, replay_logs), options);
    for (auto& c : chains) all.push_back(std::move(c));
  }

  out << fmt::format("{} chains written to {}\n", all.size(), logs_dir.string());
  for (const auto& c : all) {
    const bool counts_accepts = c.method == Method::Mcmc || c.method == Method::DirectSampling;
    out << fmt::format("{:<12} {:<16} chain {}  samples {:>4}{}{}\n", c.object, method_name(c.method), c.chain_id,
                       c.samples.size(), counts_accepts ? fmt::format("  accepted {:>4}", c.accept_count) : "",
                       c.complete ? "" : "  INCOMPLETE");
  }
  const auto traces = compute_traces(all, opt.burn_in, false, out);
  write_text_file(cfg.output_dir / "rhat.csv", rhat_csv(traces));

  std::map<std::string, GridHistogram> references;
  if (cfg.reference_path) {
    references = load_references(*cfg.reference_path, cfg.objects);
  } else if (cfg.respondent.kind == RespondentKind::Oracle) {
    for (const auto& object : cfg.objects) {
      const MixtureTarget target(cfg.target_for(object));
      references.emplace(object, target_histogram(target));
      write_reference_histogram(cfg.output_dir / "references" / (slug(object) + ".txt"), references.at(object));
    }
  }
  if (!references.empty()) {
    AlignmentOptions ao;
    ao.burn_in = opt.burn_in;
    ao.hue_metric = hue_metric_from(opt.hue_metric);
    write_report(build_alignment_report(all, references, ao), cfg.output_dir, out);
  }
  if (!opt.no_figures) render_figures(all, traces, cfg.output_dir / "figures");
  return 0;
}

std::optional<std::string> digest_of(const std::string& config_path) {
  if (config_path.empty()) return std::nullopt;
  return config_digest(load_config(config_path));
}

int cmd_diagnose(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto chains = load_logs(opt.logs, digest_of(opt.config), err);
  const auto traces = compute_traces(chains, opt.burn_in, true, out);
  if (traces.empty()) throw InsufficientChains("no MCMC or Gibbs chains to diagnose; R-hat needs at least 2 chains");
  if (!opt.out.empty()) write_text_file(fs::path(opt.out) / "rhat.csv", rhat_csv(traces));
  return 0;
}

int cmd_report(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.reference.empty()) throw MissingReference("report needs --reference (a histogram file or directory)");
  const auto chains = load_logs(opt.logs, digest_of(opt.config), err);
  std::vector<std::string> objects;
  for (const auto& c : chains) {
    if (std::find(objects.begin(), objects.end(), c.object) == objects.end()) objects.push_back(c.object);
  }
  const auto references = load_references(opt.reference, objects);
  AlignmentOptions ao;
  ao.burn_in = opt.burn_in;
  ao.hue_metric = hue_metric_from(opt.hue_metric);
  const auto report = build_alignment_report(chains, references, ao);
  if (opt.out.empty()) {
    out << report_text(report);
  } else {
    write_report(report, opt.out, out);
  }
  return 0;
}

int cmd_render(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto chains = load_logs(opt.logs, digest_of(opt.config), err);
  std::ostringstream quiet;
  const auto traces = compute_traces(chains, opt.burn_in, false, quiet);
  const fs::path dir = opt.out.empty() ? fs::path("figures") : fs::path(opt.out);
  render_figures(chains, traces, dir);
  out << "figures written to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recover color distributions from black-box respondents with sampling algorithms", "elicit"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", opt.config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", opt.seed, "Override the master seed");
  run->add_option("--out", opt.out, "Output directory");
  run->add_option("--method", opt.methods, "Method(s): direct_prompting, direct_sampling, mcmc, gibbs, all");
  run->add_option("--object", opt.objects, "Object(s) to run instead of the configured list");
  run->add_option("--reference", opt.reference, "Reference histogram file or directory");
  run->add_option("--hue-metric", opt.hue_metric, "Mode distance hue metric")
      ->check(CLI::IsMember({"linear", "circular"}));
  run->add_option("--burn-in", opt.burn_in, "Leading iterations dropped from diagnostics");
  run->add_flag("--no-figures", opt.no_figures, "Skip figure rendering");

  auto* diagnose = app.add_subcommand("diagnose", "Cumulative R-hat from chain logs");
  diagnose->add_option("--logs", opt.logs, "Directory of chain logs")->required();
  diagnose->add_option("--out", opt.out, "Directory for rhat.csv");
  diagnose->add_option("--burn-in", opt.burn_in, "Leading samples dropped");
  diagnose->add_option("--config", opt.config, "Config to check log digests against");

  auto* report = app.add_subcommand("report", "Alignment against reference histograms");
  report->add_option("--logs", opt.logs, "Directory of chain logs")->required();
  report->add_option("--reference", opt.reference, "Reference histogram file or directory");
  report->add_option("--out", opt.out, "Directory for report.csv, report.txt, progression.csv");
  report->add_option("--hue-metric", opt.hue_metric, "Mode distance hue metric")
      ->check(CLI::IsMember({"linear", "circular"}));
  report->add_option("--burn-in", opt.burn_in, "Leading iterations dropped");
  report->add_option("--config", opt.config, "Config to check log digests against");

  auto* render = app.add_subcommand("render", "Color strips, R-hat traces and scatter plots from chain logs");
  render->add_option("--logs", opt.logs, "Directory of chain logs")->required();
  render->add_option("--out", opt.out, "Figure directory");
  render->add_option("--burn-in", opt.burn_in, "Leading samples dropped from R-hat");
  render->add_option("--config", opt.config, "Config to check log digests against");

  std::vector<std::string> argv_storage{"elicit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return cmd_run(opt, out, err);
    if (*diagnose) return cmd_diagnose(opt, out, err);
    if (*report) return cmd_report(opt, out, err);
    if (*render) return cmd_render(opt, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace elicit
