#include "advice/sim/rollout.hpp"

#include "advice/machine.hpp"

namespace advice::sim {

namespace {

State sample_next(const TransitionKernel& kernel, std::size_t h, State s, Action a,
                  CounterRng& rng) {
  if (kernel.is_uniform(h, s, a)) return static_cast<State>(rng.below(kernel.num_states()));
  const auto row = kernel.row(h, s, a);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const Transition& t : row) {
    cumulative += t.prob;
    if (u < cumulative) return t.next;
  }
  return row.back().next;
}

}  // namespace

Trajectory rollout_episode(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& theta, const DeterministicPolicy& policy,
                           CounterRng& rng) {
  Trajectory traj;
  traj.steps.reserve(mdp.horizon());
  std::vector<double> response(mdp.num_actions());
  State s = mdp.initial_state();
  for (std::size_t h = 0; h < mdp.horizon(); ++h) {
    const Action machine_action = policy(h, s);
    human_action_distribution(s, h, machine_action, pi, theta, response);
    const auto human_action = static_cast<Action>(rng.categorical(response));
    const State next = sample_next(mdp.transitions(), h, s, human_action, rng);
    traj.steps.push_back({s, machine_action, human_action, mdp.reward(h, s, human_action), next});
    s = next;
  }
  return traj;
}

Trajectory rollout_episode(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& theta, const MixturePolicy& policy,
                           CounterRng& rng) {
  const bool first = rng.uniform() < policy.q;
  return rollout_episode(mdp, pi, theta, first ? policy.first : policy.second, rng);
}

}  // namespace advice::sim
