#pragma once

#include <memory>
#include <span>
#include <vector>

#include "advice/common.hpp"
#include "advice/kernel.hpp"
#include "advice/mdp.hpp"

namespace advice {

/**
 * The MDP seen by the advising machine. Actions 0..A-1 advise the matching
 * human action; action A defers to the human's own policy.
 *
 * The kernel is shared between copies, so reward-only variants (penalized
 * rewards, known-reward substitutions) are cheap to make.
 */
class MachineMDP {
 public:
  MachineMDP(std::size_t num_states, std::size_t num_human_actions, std::size_t horizon,
             State initial_state, std::shared_ptr<const TransitionKernel> transitions,
             std::vector<double> rewards);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_human_actions() const { return num_human_actions_; }
  std::size_t num_actions() const { return num_human_actions_ + 1; }
  Action defer() const { return static_cast<Action>(num_human_actions_); }
  std::size_t horizon() const { return horizon_; }
  State initial_state() const { return initial_state_; }

  const TransitionKernel& transitions() const { return *transitions_; }
  const std::shared_ptr<const TransitionKernel>& shared_transitions() const {
    return transitions_;
  }

  double reward(std::size_t h, State s, Action a) const {
    return rewards_[(h * num_states_ + s) * num_actions() + a];
  }
  std::span<const double> rewards() const { return rewards_; }

  /// Same kernel, different reward table.
  MachineMDP with_rewards(std::vector<double> rewards) const;

 private:
  std::size_t num_states_;
  std::size_t num_human_actions_;
  std::size_t horizon_;
  State initial_state_;
  std::shared_ptr<const TransitionKernel> transitions_;
  std::vector<double> rewards_;
};

/**
 * P_h(a^H = . | s, a^M): the human's response to machine action `machine_action`.
 *
 * Deferring returns pi_h(.|s). Advising a returns theta(s,a) on a and spreads
 * 1 - theta(s,a) over the other actions in proportion to pi_h. When
 * pi_h(a|s) = 1 there is no other action to fall back to and the advised
 * action is taken with probability one.
 */
void human_action_distribution(State s, std::size_t h, Action machine_action,
                               const HumanPolicy& pi, const AdherenceModel& theta,
                               std::span<double> out);

std::vector<double> human_action_distribution(State s, std::size_t h, Action machine_action,
                                              const HumanPolicy& pi,
                                              const AdherenceModel& theta);

/// Marginalizes the human's response into p^M and r^M.
MachineMDP build_machine_mdp(const TabularMDP& mdp, const HumanPolicy& pi,
                             const AdherenceModel& theta);

}  // namespace advice
