#pragma once

#include <memory>
#include <span>
#include <vector>

#include "advice/common.hpp"
#include "advice/kernel.hpp"

namespace advice {

/**
 * The human's episodic MDP: S states, A actions, horizon H, a time-dependent
 * kernel p_h(s'|s,a) and rewards r_h(s,a) in [0, 1], started from a fixed
 * initial state.
 *
 * Construction validates every invariant and throws ModelError on the first
 * offending index.
 */
class TabularMDP {
 public:
  TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
             State initial_state, TransitionKernel transitions, std::vector<double> rewards);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t horizon() const { return horizon_; }
  State initial_state() const { return initial_state_; }

  const TransitionKernel& transitions() const { return *transitions_; }
  double reward(std::size_t h, State s, Action a) const {
    return rewards_[(h * num_states_ + s) * num_actions_ + a];
  }
  std::span<const double> rewards() const { return rewards_; }

  bool operator==(const TabularMDP& other) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  State initial_state_;
  std::shared_ptr<const TransitionKernel> transitions_;
  std::vector<double> rewards_;
};

/// pi_h(a|s) for every step and state.
class HumanPolicy {
 public:
  HumanPolicy(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
              std::vector<double> probabilities);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  std::span<const double> row(std::size_t h, State s) const {
    return {probs_.data() + (h * num_states_ + s) * num_actions_, num_actions_};
  }
  double operator()(std::size_t h, State s, Action a) const {
    return probs_[(h * num_states_ + s) * num_actions_ + a];
  }
  std::span<const double> probabilities() const { return probs_; }

  bool operator==(const HumanPolicy&) const = default;

 private:
  std::size_t horizon_;
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> probs_;
};

/// theta(s, a): probability that advice a at state s is followed. Stationary in h.
class AdherenceModel {
 public:
  AdherenceModel(std::size_t num_states, std::size_t num_actions, std::vector<double> theta);

  static AdherenceModel constant(std::size_t num_states, std::size_t num_actions, double value);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double operator()(State s, Action a) const { return theta_[s * num_actions_ + a]; }
  std::span<const double> values() const { return theta_; }

  bool operator==(const AdherenceModel&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> theta_;
};

struct AdherenceViolation {
  std::size_t step;
  State state;
  Action action;
  double theta;
  double policy_prob;
};

/// Entries where theta(s,a) < pi_h(a|s), i.e. advice lowers the chance the
/// advised action is taken. Such models are legal but fall outside the
/// monotonicity guarantee of the optimal value in theta.
std::vector<AdherenceViolation> adherence_below_policy(const HumanPolicy& pi,
                                                       const AdherenceModel& theta);

/// Throws ModelError unless the three objects agree on S, A and H.
void check_compatible(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta);

}  // namespace advice
