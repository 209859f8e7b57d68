#include "elicit/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <stdexcept>

namespace elicit {

const std::vector<std::string>& default_objects() {
  static const std::vector<std::string> objects = {"Chocolate", "Lemon",    "Strawberry",
                                                   "Grass",     "Eggshell", "Lavender"};
  return objects;
}

namespace {

std::string lowercase(const std::string& text) {
  std::string out = text;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

std::vector<ChainOutput> run_experiment(const std::vector<std::string>& objects, const SamplerConfig& cfg,
                                        const RespondentFactory& factory, const ExperimentOptions& options) {
  if (objects.empty()) throw std::invalid_argument("experiment needs at least one object");
  cfg.validate();
  std::vector<ChainOutput> outputs;
  outputs.reserve(objects.size() * static_cast<std::size_t>(cfg.chains));

  for (std::size_t oi = 0; oi < objects.size(); ++oi) {
    const int object_index = static_cast<int>(oi);
    std::vector<ChainOutput> chains(static_cast<std::size_t>(cfg.chains));

    std::vector<std::shared_ptr<Respondent>> respondents;
    for (int c = 0; c < cfg.chains; ++c) respondents.push_back(factory(object_index, objects[oi], c));

    auto run_one = [&](int chain_id) {
      Respondent& respondent = *respondents[static_cast<std::size_t>(chain_id)];
      ChainContext ctx = make_chain_context(objects[oi], object_index, chain_id, cfg.master_seed);
      ctx.prompt_object = lowercase(objects[oi]);
      chains[static_cast<std::size_t>(chain_id)] = run_chain(respondent, cfg, ctx);
    };

    const int width = std::max(1, options.max_concurrent_chains);
    for (int first = 0; first < cfg.chains; first += width) {
      std::vector<std::future<void>> batch;
      const int last = std::min(cfg.chains, first + width);
      for (int c = first; c < last; ++c) {
        if (width == 1) {
          run_one(c);
        } else {
          batch.push_back(std::async(std::launch::async, run_one, c));
        }
      }
      for (auto& f : batch) f.get();
    }

    for (auto& chain : chains) {
      if (options.on_chain) options.on_chain(chain);
      outputs.push_back(std::move(chain));
    }
  }
  return outputs;
}

}  // namespace elicit
