#pragma once

#include <cstdint>

#include "advice/mdp.hpp"
#include "advice/planning.hpp"
#include "advice/rfe.hpp"
#include "advice/sim/metrics.hpp"

namespace advice::sim {

/// Hoeffding-bonus optimistic value iteration on the machine MDP with p, r
/// and theta all unknown. Not a reimplementation of any published bonus.
struct BaselineConfig {
  double delta = 0.1;
  std::size_t episodes = 1000;
  double bonus_scale = 1.0;  // c in c * H * sqrt(log(S (A+1) H T / delta) / n)
  std::size_t replan_every = 1;

  void validate() const;
};

/// Optimistic Q table: min(H, r_hat + bonus + p_hat . V_{h+1}), and H at
/// pairs never visited.
PlanningResult optimistic_plan(const EmpiricalModel& emp, const BaselineConfig& cfg);

/// Same logging contract as ucb_ad_run: one row per planning block carrying
/// the exact true-model gap of the policy played during the block.
MetricsLog baseline_optimistic(const TabularMDP& mdp, const HumanPolicy& pi,
                               const AdherenceModel& theta, const BaselineConfig& cfg,
                               std::uint64_t seed, const RowCallback& on_row = {});

}  // namespace advice::sim
