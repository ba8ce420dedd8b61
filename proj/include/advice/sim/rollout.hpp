#pragma once

#include <vector>

#include "advice/mdp.hpp"
#include "advice/policy.hpp"
#include "advice/sim/rng.hpp"

namespace advice::sim {

struct Step {
  State state;
  Action machine_action;  // index A means defer
  Action human_action;
  double reward;
  State next_state;
};

/// One episode: exactly H steps, steps[h].next_state == steps[h + 1].state.
struct Trajectory {
  std::vector<Step> steps;
};

/**
 * Plays one episode against the true dynamics: the machine acts, the human
 * responds by the adherence law under the true theta, and the environment
 * moves by the true kernel.
 */
Trajectory rollout_episode(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& theta, const DeterministicPolicy& policy,
                           CounterRng& rng);

/// Draws the mixture component once, then plays it.
Trajectory rollout_episode(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& theta, const MixturePolicy& policy,
                           CounterRng& rng);

}  // namespace advice::sim
