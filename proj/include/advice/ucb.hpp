#pragma once

#include <cstdint>
#include <vector>

#include "advice/machine.hpp"
#include "advice/mdp.hpp"
#include "advice/planning.hpp"
#include "advice/sim/metrics.hpp"
#include "advice/sim/rollout.hpp"

namespace advice {

/// Adherence counts pooled over all steps of all episodes: theta is
/// stationary, so every advised step at (s, a) is a sample of theta(s, a).
class AdherenceEstimator {
 public:
  AdherenceEstimator(std::size_t num_states, std::size_t num_actions);

  /// Counts every advised step; deferred steps carry no information about theta.
  void update(const sim::Trajectory& traj);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  std::uint64_t advised(State s, Action a) const { return advised_[s * num_actions_ + a]; }
  std::uint64_t adhered(State s, Action a) const { return adhered_[s * num_actions_ + a]; }
  /// adhered / advised, 0 when never advised.
  double theta_hat(State s, Action a) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<std::uint64_t> advised_;
  std::vector<std::uint64_t> adhered_;
};

enum class WidthMode { theory, practical };

struct UcbConfig {
  double delta = 0.1;
  std::size_t episodes = 1000;  // T: the width needs the budget up front
  WidthMode width_mode = WidthMode::practical;
  double width_scale = 0.4;     // c in c * sqrt(2 log(n) / n)
  std::size_t replan_every = 1;

  void validate() const;
};

/**
 * C(theta_hat, n, T, delta). Theory mode is the minimum of the three
 * published terms, with the third dropped for n <= 1 where it divides by
 * n - 1. Practical mode is c * sqrt(2 log(n) / n). Infinite for n = 0.
 */
double confidence_width(double theta_hat, std::uint64_t n, std::size_t num_states,
                        std::size_t num_actions, const UcbConfig& cfg);

/// min(1, theta_hat + C / sqrt(n)), and 1 where (s, a) was never advised.
AdherenceModel optimistic_theta(const AdherenceEstimator& est, const UcbConfig& cfg);

/**
 * Step-wise UCB-AD for known p, r and pi^H with unknown theta: plan against
 * the optimistic adherence, play, update the counts.
 */
class UcbLearner {
 public:
  UcbLearner(const TabularMDP& mdp, const HumanPolicy& pi, UcbConfig cfg);

  /// Recomputes the optimistic adherence and the policy that is optimal under it.
  void replan();
  void observe(const sim::Trajectory& traj) { estimator_.update(traj); }

  const AdherenceEstimator& estimator() const { return estimator_; }
  const AdherenceModel& optimistic() const { return optimistic_; }
  const DeterministicPolicy& policy() const { return policy_; }
  /// Optimal value at s1 of the machine MDP built from the optimistic adherence.
  double optimistic_value() const { return optimistic_value_; }

 private:
  const TabularMDP& mdp_;
  const HumanPolicy& pi_;
  UcbConfig cfg_;
  AdherenceEstimator estimator_;
  AdherenceModel optimistic_;
  DeterministicPolicy policy_;
  double optimistic_value_ = 0.0;
};

/**
 * Runs cfg.episodes episodes of UCB-AD against the true adherence, replanning
 * every cfg.replan_every episodes. Emits one row per planning block with the
 * exact true-model gap V*(s1) - V^pi(s1) of the block's policy.
 */
sim::MetricsLog ucb_ad_run(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& true_theta, const UcbConfig& cfg,
                           std::uint64_t seed, const sim::RowCallback& on_row = {});

}  // namespace advice
