#pragma once

#include "advice/machine.hpp"
#include "advice/policy.hpp"

namespace advice {

struct PlanningResult {
  QTable q;
  ValueTable v;
  DeterministicPolicy policy;
};

/// Exact finite-horizon dynamic programming. V[h][s] = max_a Q[h][s][a]; the
/// policy takes the lowest action index within kTieTolerance of the max.
PlanningResult backward_induction(const MachineMDP& m);

ValueTable policy_evaluation(const MachineMDP& m, const DeterministicPolicy& policy);

/// q-weighted combination of the component tables. Only the h = 0 layer has
/// the episode-level meaning, since the component is drawn once per episode.
ValueTable policy_evaluation(const MachineMDP& m, const MixturePolicy& policy);

/// V^pi(s1) for a mixture; convenience over policy_evaluation.
double initial_value(const MachineMDP& m, const MixturePolicy& policy);
double initial_value(const MachineMDP& m, const DeterministicPolicy& policy);

DeterministicPolicy always_defer(const MachineMDP& m);

/// Value of the unassisted human, i.e. of deferring everywhere.
ValueTable human_value(const MachineMDP& m);

/// Forward recursion from the initial state.
OccupancyMeasure occupancy_measures(const MachineMDP& m, const DeterministicPolicy& policy);

/// E[sum_h 1{a_h != defer}].
double expected_advice_count(const MachineMDP& m, const DeterministicPolicy& policy);
double expected_advice_count(const MachineMDP& m, const MixturePolicy& policy);

}  // namespace advice
