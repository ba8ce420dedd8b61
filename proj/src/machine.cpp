#include "advice/machine.hpp"

#include <cmath>

namespace advice {

MachineMDP::MachineMDP(std::size_t num_states, std::size_t num_human_actions,
                       std::size_t horizon, State initial_state,
                       std::shared_ptr<const TransitionKernel> transitions,
                       std::vector<double> rewards)
    : num_states_(num_states),
      num_human_actions_(num_human_actions),
      horizon_(horizon),
      initial_state_(initial_state),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  if (num_states_ == 0 || num_human_actions_ == 0 || horizon_ == 0) {
    throw ModelError("MachineMDP: S, A and H must be positive");
  }
  if (initial_state_ >= num_states_) throw ModelError("MachineMDP: initial state out of range");
  if (!transitions_ || transitions_->horizon() != horizon_ ||
      transitions_->num_states() != num_states_ ||
      transitions_->num_actions() != num_actions()) {
    throw ModelError("MachineMDP: transition kernel dimensions do not match (S, A+1, H)");
  }
  if (rewards_.size() != horizon_ * num_states_ * num_actions()) {
    throw ModelError("MachineMDP: reward table has the wrong size");
  }
  for (double r : rewards_) {
    if (!std::isfinite(r)) throw ModelError("MachineMDP: non-finite reward");
  }
}

MachineMDP MachineMDP::with_rewards(std::vector<double> rewards) const {
  return MachineMDP(num_states_, num_human_actions_, horizon_, initial_state_, transitions_,
                    std::move(rewards));
}

void human_action_distribution(State s, std::size_t h, Action machine_action,
                               const HumanPolicy& pi, const AdherenceModel& theta,
                               std::span<double> out) {
  const std::size_t num_actions = pi.num_actions();
  const auto row = pi.row(h, s);
  if (machine_action >= num_actions) {
    std::copy(row.begin(), row.end(), out.begin());
    return;
  }
  const double adhere = theta(s, machine_action);
  const double rest = 1.0 - row[machine_action];
  if (rest <= 0.0) {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(num_actions), 0.0);
    out[machine_action] = 1.0;
    return;
  }
  for (Action a = 0; a < num_actions; ++a) {
    out[a] = a == machine_action ? adhere : (1.0 - adhere) * row[a] / rest;
  }
}

std::vector<double> human_action_distribution(State s, std::size_t h, Action machine_action,
                                              const HumanPolicy& pi,
                                              const AdherenceModel& theta) {
  std::vector<double> out(pi.num_actions());
  human_action_distribution(s, h, machine_action, pi, theta, out);
  return out;
}

MachineMDP build_machine_mdp(const TabularMDP& mdp, const HumanPolicy& pi,
                             const AdherenceModel& theta) {
  check_compatible(mdp, pi, theta);
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  const std::size_t machine_actions = A + 1;

  TransitionKernel kernel(H, S, machine_actions);
  std::vector<double> rewards(H * S * machine_actions, 0.0);

  std::vector<double> response(A);
  std::vector<double> scratch(S, 0.0);
  std::vector<State> touched;
  std::vector<Transition> row;

  for (std::size_t h = 0; h < H; ++h) {
    for (State s = 0; s < S; ++s) {
      for (Action am = 0; am < machine_actions; ++am) {
        human_action_distribution(s, h, am, pi, theta, response);
        double r = 0.0;
        touched.clear();
        for (Action a = 0; a < A; ++a) {
          if (response[a] == 0.0) continue;
          r += response[a] * mdp.reward(h, s, a);
          for (const Transition& t : mdp.transitions().row(h, s, a)) {
            if (scratch[t.next] == 0.0) touched.push_back(t.next);
            scratch[t.next] += response[a] * t.prob;
          }
        }
        row.clear();
        double total = 0.0;
        for (State next : touched) {
          row.push_back({next, scratch[next]});
          total += scratch[next];
          scratch[next] = 0.0;
        }
        // Absorb floating drift only; anything larger is a modelling error.
        if (std::abs(total - 1.0) > kHumanRowTolerance) {
          throw ModelError("build_machine_mdp: p^M row does not sum to one");
        }
        for (Transition& t : row) t.prob /= total;
        kernel.append_row(row);
        rewards[(h * S + s) * machine_actions + am] = r;
      }
    }
  }
  kernel.validate(kProbabilityTolerance);
  return MachineMDP(S, A, H, mdp.initial_state(),
                    std::make_shared<const TransitionKernel>(std::move(kernel)),
                    std::move(rewards));
}

}  // namespace advice
