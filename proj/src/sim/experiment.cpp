#include "advice/sim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace advice::sim {

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::ucb_ad: return "ucb-ad";
    case Algorithm::rfe_advice: return "rfe-advice";
    case Algorithm::rfe_beta: return "rfe-beta";
    case Algorithm::baseline: return "baseline";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::ucb_ad, Algorithm::rfe_advice, Algorithm::rfe_beta,
                      Algorithm::baseline}) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected ucb-ad, rfe-advice, rfe-beta or baseline)");
}

CsvSchema csv_schema(Algorithm algo) {
  return algo == Algorithm::rfe_advice || algo == Algorithm::rfe_beta ? CsvSchema::rfe
                                                                      : CsvSchema::regret;
}

void RunConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  if (replan_every < 1) throw std::invalid_argument("replan_every must be at least 1");
}

RunResult run_experiment(const envs::Environment& env, const RunConfig& cfg) {
  cfg.validate();
  const CsvSchema schema = csv_schema(cfg.algorithm);

  std::optional<std::ofstream> out;
  if (!cfg.csv_path.empty()) {
    out.emplace(cfg.csv_path, std::ios::binary | std::ios::trunc);
    if (!*out) throw std::runtime_error("cannot open " + cfg.csv_path.string() + " for writing");
    write_csv_header(*out, schema);
  }
  const RowCallback on_row = [&](const MetricsRow& row) {
    if (!out) return;
    write_csv_row(*out, row, schema);
    out->flush();
    if (!*out) throw std::runtime_error("write failed on " + cfg.csv_path.string());
  };

  RunResult result;
  switch (cfg.algorithm) {
    case Algorithm::ucb_ad: {
      UcbConfig c = cfg.ucb;
      c.episodes = cfg.episodes;
      c.replan_every = cfg.replan_every;
      result.log = ucb_ad_run(env.mdp, env.policy, env.adherence, c, cfg.seed, on_row);
      result.episodes = c.episodes;
      break;
    }
    case Algorithm::rfe_advice:
    case Algorithm::rfe_beta: {
      RfeConfig c = cfg.rfe;
      c.max_episodes = cfg.episodes;
      c.replan_every = cfg.replan_every;
      c.threshold_mode =
          cfg.algorithm == Algorithm::rfe_beta ? ThresholdMode::beta : ThresholdMode::advice;
      RfeRunResult run = rfe_run(env.mdp, env.policy, env.adherence, c, cfg.seed, on_row);
      result.log = std::move(run.log);
      result.model = std::move(run.model);
      result.episodes = run.episodes;
      result.converged = run.converged;
      break;
    }
    case Algorithm::baseline: {
      BaselineConfig c = cfg.baseline;
      c.episodes = cfg.episodes;
      c.replan_every = cfg.replan_every;
      result.log = baseline_optimistic(env.mdp, env.policy, env.adherence, c, cfg.seed, on_row);
      result.episodes = c.episodes;
      break;
    }
  }
  if (out) {
    out->close();
    if (!*out) throw std::runtime_error("closing " + cfg.csv_path.string() + " failed");
  }
  return result;
}

std::vector<RunResult> run_many(const envs::Environment& env, std::span<const RunConfig> runs,
                                 std::size_t threads) {
  std::vector<RunResult> results(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        results[i] = run_experiment(env, runs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(runs.size(), 1));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace advice::sim
