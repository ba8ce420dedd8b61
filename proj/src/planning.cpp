#include "advice/planning.hpp"

#include <algorithm>

namespace advice {

namespace {

void check_policy_shape(const MachineMDP& m, const DeterministicPolicy& policy) {
  if (policy.horizon() != m.horizon() || policy.num_states() != m.num_states()) {
    throw ModelError("policy shape does not match the machine MDP");
  }
  policy.validate(m.defer());
}

}  // namespace

PlanningResult backward_induction(const MachineMDP& m) {
  const std::size_t S = m.num_states();
  const std::size_t H = m.horizon();
  const std::size_t num_actions = m.num_actions();
  const auto& kernel = m.transitions();

  PlanningResult out{QTable(H, S, num_actions), ValueTable(H, S),
                     DeterministicPolicy(H, S, m.defer())};
  for (std::size_t h = H; h-- > 0;) {
    const auto next = out.v.layer(h + 1);
    const double next_mean = mean_of(next);
    for (State s = 0; s < S; ++s) {
      for (Action a = 0; a < num_actions; ++a) {
        out.q(h, s, a) = m.reward(h, s, a) + kernel.expectation(h, s, a, next, next_mean);
      }
      const auto row = out.q.row(h, s);
      out.policy(h, s) = tie_broken_argmax(row);
      out.v(h, s) = *std::max_element(row.begin(), row.end());
    }
  }
  return out;
}

ValueTable policy_evaluation(const MachineMDP& m, const DeterministicPolicy& policy) {
  check_policy_shape(m, policy);
  const std::size_t S = m.num_states();
  const std::size_t H = m.horizon();
  const auto& kernel = m.transitions();

  ValueTable v(H, S);
  for (std::size_t h = H; h-- > 0;) {
    const auto next = v.layer(h + 1);
    const double next_mean = mean_of(next);
    for (State s = 0; s < S; ++s) {
      const Action a = policy(h, s);
      v(h, s) = m.reward(h, s, a) + kernel.expectation(h, s, a, next, next_mean);
    }
  }
  return v;
}

ValueTable policy_evaluation(const MachineMDP& m, const MixturePolicy& policy) {
  policy.validate(m.defer());
  const ValueTable first = policy_evaluation(m, policy.first);
  if (policy.q == 1.0) return first;
  const ValueTable second = policy_evaluation(m, policy.second);
  ValueTable out(m.horizon(), m.num_states());
  for (std::size_t h = 0; h <= m.horizon(); ++h) {
    for (State s = 0; s < m.num_states(); ++s) {
      out(h, s) = policy.q * first(h, s) + (1.0 - policy.q) * second(h, s);
    }
  }
  return out;
}

double initial_value(const MachineMDP& m, const MixturePolicy& policy) {
  return policy_evaluation(m, policy)(0, m.initial_state());
}

double initial_value(const MachineMDP& m, const DeterministicPolicy& policy) {
  return policy_evaluation(m, policy)(0, m.initial_state());
}

DeterministicPolicy always_defer(const MachineMDP& m) {
  return DeterministicPolicy(m.horizon(), m.num_states(), m.defer());
}

ValueTable human_value(const MachineMDP& m) { return policy_evaluation(m, always_defer(m)); }

OccupancyMeasure occupancy_measures(const MachineMDP& m, const DeterministicPolicy& policy) {
  check_policy_shape(m, policy);
  const std::size_t S = m.num_states();
  const std::size_t H = m.horizon();
  const auto& kernel = m.transitions();

  OccupancyMeasure mu(H, S, m.num_actions());
  std::vector<double> dist(S, 0.0);
  std::vector<double> next(S, 0.0);
  dist[m.initial_state()] = 1.0;
  for (std::size_t h = 0; h < H; ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    double uniform_mass = 0.0;
    for (State s = 0; s < S; ++s) {
      if (dist[s] == 0.0) continue;
      const Action a = policy(h, s);
      mu(h, s, a) = dist[s];
      if (kernel.is_uniform(h, s, a)) {
        uniform_mass += dist[s];
        continue;
      }
      for (const Transition& t : kernel.row(h, s, a)) next[t.next] += dist[s] * t.prob;
    }
    if (uniform_mass > 0.0) {
      const double share = uniform_mass / static_cast<double>(S);
      for (double& x : next) x += share;
    }
    dist.swap(next);
  }
  return mu;
}

double expected_advice_count(const MachineMDP& m, const DeterministicPolicy& policy) {
  const OccupancyMeasure mu = occupancy_measures(m, policy);
  double count = 0.0;
  for (std::size_t h = 0; h < m.horizon(); ++h) {
    for (State s = 0; s < m.num_states(); ++s) {
      for (Action a = 0; a < m.defer(); ++a) count += mu(h, s, a);
    }
  }
  return count;
}

double expected_advice_count(const MachineMDP& m, const MixturePolicy& policy) {
  policy.validate(m.defer());
  const double first = expected_advice_count(m, policy.first);
  if (policy.q == 1.0) return first;
  return policy.q * first + (1.0 - policy.q) * expected_advice_count(m, policy.second);
}

}  // namespace advice
