#include "elicit/samplers.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "elicit/errors.hpp"

namespace elicit {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::DirectPrompting: return "direct_prompting";
    case Method::DirectSampling: return "direct_sampling";
    case Method::Mcmc: return "mcmc";
    case Method::Gibbs: return "gibbs";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) {
  for (Method m : kAllMethods) {
    if (method_name(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view proposal_kind_name(ProposalKind k) {
  switch (k) {
    case ProposalKind::None: return "n/a";
    case ProposalKind::Gaussian: return "gaussian";
    case ProposalKind::Uniform: return "uniform";
  }
  return "?";
}

std::optional<ProposalKind> parse_proposal_kind(std::string_view text) {
  for (ProposalKind k : {ProposalKind::None, ProposalKind::Gaussian, ProposalKind::Uniform}) {
    if (proposal_kind_name(k) == text) return k;
  }
  return std::nullopt;
}

void SamplerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (!(proposal_variance >= 0.0) || !std::isfinite(proposal_variance)) {
    throw std::invalid_argument("proposal variance must be finite and >= 0");
  }
  if (!(uniform_jump_probability >= 0.0 && uniform_jump_probability <= 1.0)) {
    throw std::invalid_argument("uniform jump probability must lie in [0, 1]");
  }
  if (gibbs_order.empty()) throw std::invalid_argument("gibbs order must name at least one dimension");
  if (transport_retries < 0) throw std::invalid_argument("transport retries must be >= 0");
}

HslColor init_state(Rng& rng) {
  const int h = uniform_int(rng, 0, 359);
  const int s = uniform_int(rng, 0, 100);
  const int l = uniform_int(rng, 0, 100);
  return {h, s, l};
}

std::array<double, 3> gaussian_offset(Rng& rng, double variance) {
  if (variance == 0.0) return {0.0, 0.0, 0.0};
  const double sd = std::sqrt(variance);
  std::array<double, 3> out{};
  for (double& v : out) v = normal(rng, 0.0, sd);
  return out;
}

Proposal propose(const HslColor& current, Rng& rng, double variance, double jump_probability) {
  if (bernoulli(rng, jump_probability)) return {init_state(rng), ProposalKind::Uniform};
  const auto step = gaussian_offset(rng, variance);
  return {canonicalize(current.h + step[0], current.s + step[1], current.l + step[2]), ProposalKind::Gaussian};
}

ChainContext make_chain_context(std::string object, int object_index, int chain_id, std::uint64_t master_seed) {
  ChainContext ctx;
  ctx.object = std::move(object);
  ctx.object_index = object_index;
  ctx.chain_id = chain_id;
  ctx.sampler_rng = derive_stream(master_seed, static_cast<std::uint32_t>(object_index),
                                  static_cast<std::uint32_t>(chain_id), Stream::Sampler);
  ctx.respondent_rng = derive_stream(master_seed, static_cast<std::uint32_t>(object_index),
                                     static_cast<std::uint32_t>(chain_id), Stream::Respondent);
  return ctx;
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", std::chrono::floor<std::chrono::seconds>(now));
}

/// Shared iteration bookkeeping for all four methods.
class ChainRun {
 public:
  ChainRun(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx, Method method)
      : respondent_(respondent), cfg_(cfg), ctx_(ctx) {
    cfg_.validate();
    out_.object = ctx.object;
    out_.object_index = ctx.object_index;
    out_.method = method;
    out_.chain_id = ctx.chain_id;
  }

  const std::string& object() const { return ctx_.prompt_object.empty() ? ctx_.object : ctx_.prompt_object; }
  Rng& rng() { return ctx_.sampler_rng; }

  ChainRecord start_record(int iteration, const HslColor& current, Query query) {
    ChainRecord rec;
    rec.chain_id = ctx_.chain_id;
    rec.iteration = iteration;
    rec.method = out_.method;
    rec.current = current;
    rec.prompt = render_prompt(query);
    rec.query = std::move(query);
    return rec;
  }

  /// Asks with transport retries; fills the answer fields of `rec`.
  void ask(ChainRecord& rec) {
    for (int attempt = 0;; ++attempt) {
      try {
        Response r = respondent_.answer(rec.query, ctx_.respondent_rng);
        if (!answer_matches(rec.query, r.answer)) {
          throw RespondentFailure("respondent answered a different query kind");
        }
        rec.answer = std::move(r.answer);
        rec.raw_answer = std::move(r.raw);
        rec.attempts = r.attempts;
        if (cfg_.record_timestamps) rec.timestamp = utc_now();
        return;
      } catch (const TransportError&) {
        if (attempt >= cfg_.transport_retries) throw;
        std::this_thread::sleep_for(cfg_.transport_backoff * (1 << std::min(attempt, 10)));
      }
    }
  }

  void commit(ChainRecord rec, std::optional<HslColor> sample) {
    if (sample) {
      out_.samples.push_back(*sample);
      out_.sample_iterations.push_back(rec.iteration);
    }
    if (rec.accepted) ++out_.accept_count;
    out_.records.push_back(std::move(rec));
  }

  HslColor initial_state() { return ctx_.initial ? *ctx_.initial : init_state(ctx_.sampler_rng); }

  /// Runs `body(iteration)` for every iteration, converting respondent
  /// failures into an incomplete output.
  template <class Body>
  ChainOutput run(int iterations, Body&& body) {
    try {
      for (int t = 0; t < iterations; ++t) body(t);
    } catch (const Error& e) {
      out_.complete = false;
      out_.error = e.what();
    }
    return std::move(out_);
  }

  const SamplerConfig& cfg() const { return cfg_; }
  ChainContext& ctx() { return ctx_; }

 private:
  Respondent& respondent_;
  const SamplerConfig& cfg_;
  ChainContext& ctx_;
  ChainOutput out_;
};

}  // namespace

ChainOutput run_mcmc(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx) {
  ChainRun run(respondent, cfg, ctx, Method::Mcmc);
  HslColor state = run.initial_state();
  return run.run(cfg.iterations, [&](int t) {
    const Proposal prop = ctx.proposer ? ctx.proposer(state, run.rng())
                                       : propose(state, run.rng(), cfg.proposal_variance,
                                                 cfg.uniform_jump_probability);
    const bool candidate_first = bernoulli(run.rng(), 0.5);
    PairwiseChoice q{run.object(), candidate_first ? prop.candidate : state,
                     candidate_first ? state : prop.candidate};
    ChainRecord rec = run.start_record(t, state, std::move(q));
    rec.proposal = prop.candidate;
    rec.proposal_kind = prop.kind;
    rec.candidate_first = candidate_first;
    run.ask(rec);
    const bool picked_a = std::get<ChoiceAnswer>(rec.answer).choice == Choice::A;
    rec.accepted = picked_a == candidate_first;
    if (rec.accepted) state = prop.candidate;
    rec.result = state;
    run.commit(std::move(rec), state);
  });
}

ChainOutput run_gibbs(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx) {
  ChainRun run(respondent, cfg, ctx, Method::Gibbs);
  HslColor state = run.initial_state();
  const auto& order = cfg.gibbs_order;
  const int updates_per_iteration = cfg.gibbs_count_sweeps ? static_cast<int>(order.size()) : 1;
  int update = 0;
  return run.run(cfg.iterations, [&](int t) {
    for (int u = 0; u < updates_per_iteration; ++u, ++update) {
      const Dimension dim = order[static_cast<std::size_t>(update) % order.size()];
      ChainRecord rec = run.start_record(t, state, make_dimension_fill(run.object(), state, dim));
      run.ask(rec);
      const int raw_value = std::get<DimensionValue>(rec.answer).value;
      const int value = canonicalize_value(dim, raw_value);
      rec.fill_canonicalized = value != raw_value;
      state = state.with(dim, value);
      rec.result = state;
      const bool last = u + 1 == updates_per_iteration;
      run.commit(std::move(rec), last ? std::optional<HslColor>(state) : std::nullopt);
    }
  });
}

ChainOutput run_direct_sampling(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx) {
  ChainRun run(respondent, cfg, ctx, Method::DirectSampling);
  return run.run(cfg.iterations, [&](int t) {
    const HslColor color = init_state(run.rng());
    ChainRecord rec = run.start_record(t, color, MatchJudgment{run.object(), color});
    run.ask(rec);
    rec.accepted = std::get<YesNo>(rec.answer).yes;
    rec.result = color;
    const bool keep = rec.accepted;
    run.commit(std::move(rec), keep ? std::optional<HslColor>(color) : std::nullopt);
  });
}

ChainOutput run_direct_prompting(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx) {
  ChainRun run(respondent, cfg, ctx, Method::DirectPrompting);
  return run.run(cfg.iterations, [&](int t) {
    ChainRecord rec = run.start_record(t, HslColor{}, ReportColor{run.object()});
    run.ask(rec);
    const HslColor color = std::get<ColorCode>(rec.answer).color;
    rec.current = color;
    rec.result = color;
    run.commit(std::move(rec), color);
  });
}

ChainOutput run_chain(Respondent& respondent, const SamplerConfig& cfg, ChainContext& ctx) {
  switch (cfg.method) {
    case Method::DirectPrompting: return run_direct_prompting(respondent, cfg, ctx);
    case Method::DirectSampling: return run_direct_sampling(respondent, cfg, ctx);
    case Method::Mcmc: return run_mcmc(respondent, cfg, ctx);
    case Method::Gibbs: return run_gibbs(respondent, cfg, ctx);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace elicit
