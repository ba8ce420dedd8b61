#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "advice/envs/environment.hpp"
#include "advice/rfe.hpp"
#include "advice/sim/baseline.hpp"
#include "advice/sim/metrics.hpp"
#include "advice/ucb.hpp"

namespace advice::sim {

enum class Algorithm { ucb_ad, rfe_advice, rfe_beta, baseline };

std::string_view algorithm_name(Algorithm algo);
/// Inverse of algorithm_name; throws std::invalid_argument on unknown names.
Algorithm parse_algorithm(std::string_view name);

CsvSchema csv_schema(Algorithm algo);

/// One learning run. `episodes` and `replan_every` override the matching
/// fields of the per-algorithm configs; for the RFE variants `episodes` is
/// the exploration cap.
struct RunConfig {
  Algorithm algorithm = Algorithm::ucb_ad;
  std::size_t episodes = 1000;
  std::size_t replan_every = 1;
  std::uint64_t seed = 0;
  UcbConfig ucb;
  RfeConfig rfe;
  BaselineConfig baseline;
  std::filesystem::path csv_path;  // empty: no file

  void validate() const;
};

struct RunResult {
  MetricsLog log;
  std::optional<EmpiricalModel> model;  // set for the RFE variants
  std::size_t episodes = 0;
  bool converged = false;  // RFE only: the stopping rule fired before the cap
};

/// Runs one learner, streaming rows to cfg.csv_path as they are produced.
/// File errors throw std::runtime_error naming the path.
RunResult run_experiment(const envs::Environment& env, const RunConfig& cfg);

/// Runs independent configurations on up to `threads` worker threads.
/// Results come back in input order whatever the scheduling.
std::vector<RunResult> run_many(const envs::Environment& env, std::span<const RunConfig> runs,
                                 std::size_t threads);

}  // namespace advice::sim
