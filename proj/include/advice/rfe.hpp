#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "advice/machine.hpp"
#include "advice/mdp.hpp"
#include "advice/pertinence.hpp"
#include "advice/policy.hpp"
#include "advice/sim/metrics.hpp"
#include "advice/sim/rollout.hpp"

namespace advice {

/**
 * Visit statistics of the machine MDP per (h, s, a^M): visit counts,
 * successor counts and reward sums. Unvisited pairs read as a uniform
 * successor distribution with reward 0.
 */
class EmpiricalModel {
 public:
  EmpiricalModel(std::size_t num_states, std::size_t num_human_actions, std::size_t horizon,
                 State initial_state);

  void update(const sim::Trajectory& traj);

  /// Adds `n` visits of (h, s, a) that all moved to `next` with reward `reward`.
  void record(std::size_t h, State s, Action a, State next, double reward, std::uint64_t n = 1);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_human_actions() const { return num_human_actions_; }
  std::size_t num_actions() const { return num_human_actions_ + 1; }
  std::size_t horizon() const { return horizon_; }
  State initial_state() const { return initial_state_; }

  std::uint64_t visits(std::size_t h, State s, Action a) const { return cell(h, s, a).visits; }
  /// Successor counts sorted by state.
  std::span<const std::pair<State, std::uint64_t>> successors(std::size_t h, State s,
                                                              Action a) const {
    return cell(h, s, a).successors;
  }
  double p_hat(std::size_t h, State s, Action a, State next) const;
  double r_hat(std::size_t h, State s, Action a) const;

  /// (S, A+1, H, p_hat, r_hat).
  MachineMDP to_machine_mdp() const;
  /// p_hat with a caller-supplied reward table over the machine actions.
  MachineMDP to_machine_mdp(std::vector<double> rewards) const;

 private:
  struct Cell {
    std::uint64_t visits = 0;
    double reward_sum = 0.0;
    std::vector<std::pair<State, std::uint64_t>> successors;
  };

  const Cell& cell(std::size_t h, State s, Action a) const {
    return cells_[(h * num_states_ + s) * num_actions() + a];
  }
  Cell& cell(std::size_t h, State s, Action a) {
    return cells_[(h * num_states_ + s) * num_actions() + a];
  }

  std::size_t num_states_;
  std::size_t num_human_actions_;
  std::size_t horizon_;
  State initial_state_;
  std::vector<Cell> cells_;
};

/// W[h][s][a] for h = 0..H with W[H] identically zero.
class WTable {
 public:
  WTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions, double fill);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double operator()(std::size_t h, State s, Action a) const {
    return values_[(h * num_states_ + s) * num_actions_ + a];
  }
  double& operator()(std::size_t h, State s, Action a) {
    return values_[(h * num_states_ + s) * num_actions_ + a];
  }
  std::span<const double> row(std::size_t h, State s) const {
    return {values_.data() + (h * num_states_ + s) * num_actions_, num_actions_};
  }

 private:
  std::size_t horizon_;
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> values_;
};

/// beta: stop below epsilon / H (uniform over all penalties).
/// advice: stop below epsilon / 2 (plain advice, no penalty).
enum class ThresholdMode { beta, advice };

struct RfeConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  double bonus_scale = 1.0;
  ThresholdMode threshold_mode = ThresholdMode::beta;
  std::size_t max_episodes = 1'000'000;
  std::size_t replan_every = 1;
  // c in phi = 6 log(c H S A / (eps delta)) + S log(8e(n+1)); 4e gives the looser variant
  double phi_log_constant = 4.0;
  bool known_reward = false;

  void validate() const;
  double threshold(std::size_t horizon) const;
};

/// 6 log(c H S A / (epsilon delta)) + S log(8 e (n + 1)).
double phi(std::uint64_t n, std::size_t num_states, std::size_t num_actions,
           std::size_t horizon, double epsilon, double delta, double log_constant = 4.0);

/**
 * W_h(s,a) = min(H, scale * 16 H^2 phi(n) / n
 *                   + (1 + 1/H) sum_s' p_hat(s'|s,a) max_a' W_{h+1}(s', a'))
 * with W = H wherever n = 0.
 */
WTable compute_w(const EmpiricalModel& emp, const RfeConfig& cfg);

/// argmax over the full machine action set, defer included.
DeterministicPolicy w_greedy_policy(const WTable& w);

/// True when W + 4e sqrt(W) <= threshold (inclusive).
bool stopping_check(double w_root, double threshold);
bool stopping_check(const WTable& w, const DeterministicPolicy& policy, State initial_state,
                    const RfeConfig& cfg);

/// Stage 1 of reward-free exploration, one episode at a time.
class RfeExplorer {
 public:
  RfeExplorer(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta,
              RfeConfig cfg, std::uint64_t seed);

  /// Plays one episode unless stopped or at the cap; returns whether it played.
  bool step();

  bool stopped() const { return stopped_; }
  bool at_cap() const { return episodes_ >= cfg_.max_episodes; }
  std::size_t episodes() const { return episodes_; }
  double w_root() const { return w_root_; }
  const EmpiricalModel& model() const { return model_; }
  const WTable& w() const { return w_; }
  const DeterministicPolicy& policy() const { return policy_; }

 private:
  void refresh();

  const TabularMDP& mdp_;
  const HumanPolicy& pi_;
  const AdherenceModel& theta_;
  RfeConfig cfg_;
  std::uint64_t seed_;
  EmpiricalModel model_;
  WTable w_;
  DeterministicPolicy policy_;
  double w_root_ = 0.0;
  bool stopped_ = false;
  std::size_t episodes_ = 0;
};

struct ExploreResult {
  EmpiricalModel model;
  std::size_t episodes = 0;
  bool converged = false;  // false: the episode cap was reached first
  double w_root = 0.0;
};

ExploreResult explore(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta,
                      const RfeConfig& cfg, std::uint64_t seed);

/// Penalized planning on the empirical model, one policy per beta.
std::vector<DeterministicPolicy> plan_stage2_beta(
    const EmpiricalModel& emp, std::span<const double> betas,
    std::optional<std::span<const double>> known_rewards = std::nullopt);

/// Budget-constrained planning on the empirical model. A budget of H or more
/// returns the unconstrained empirical optimum.
CmdpSolution plan_stage2_cmdp(const EmpiricalModel& emp, const BudgetConfig& cfg,
                              std::optional<std::span<const double>> known_rewards = std::nullopt);

struct RfeRunResult {
  sim::MetricsLog log;
  EmpiricalModel model;
  std::size_t episodes = 0;
  bool converged = false;
};

/**
 * Explores until the stopping rule or the cap, and every cfg.replan_every
 * episodes plans beta = 0 on the current empirical model and logs its exact
 * true-model value gap. With cfg.known_reward the planner reads the true
 * machine rewards instead of their estimates.
 */
RfeRunResult rfe_run(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta,
                     const RfeConfig& cfg, std::uint64_t seed,
                     const sim::RowCallback& on_row = {});

/// rfe_run with the epsilon / 2 stopping threshold.
sim::MetricsLog rfe_advice_run(const TabularMDP& mdp, const HumanPolicy& pi,
                               const AdherenceModel& theta, const RfeConfig& cfg,
                               std::uint64_t seed, const sim::RowCallback& on_row = {});

}  // namespace advice
