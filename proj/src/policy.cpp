#include "advice/policy.hpp"

#include <algorithm>

namespace advice {

DeterministicPolicy::DeterministicPolicy(std::size_t horizon, std::size_t num_states, Action fill)
    : horizon_(horizon), num_states_(num_states), actions_(horizon * num_states, fill) {}

DeterministicPolicy::DeterministicPolicy(std::size_t horizon, std::size_t num_states,
                                         std::vector<Action> actions)
    : horizon_(horizon), num_states_(num_states), actions_(std::move(actions)) {
  if (actions_.size() != horizon_ * num_states_) {
    throw ModelError("DeterministicPolicy: action table has the wrong size");
  }
}

void DeterministicPolicy::validate(Action defer_action) const {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i] > defer_action) {
      throw ModelError("policy act[h=" + std::to_string(i / num_states_) +
                       "][s=" + std::to_string(i % num_states_) + "] = " +
                       std::to_string(actions_[i]) + " exceeds the defer index " +
                       std::to_string(defer_action));
    }
  }
}

MixturePolicy MixturePolicy::pure(DeterministicPolicy policy) {
  MixturePolicy m{policy, policy, 1.0};
  return m;
}

void MixturePolicy::validate(Action defer_action) const {
  if (!(q >= 0.0 && q <= 1.0)) throw ModelError("MixturePolicy: q must lie in [0, 1]");
  if (first.horizon() != second.horizon() || first.num_states() != second.num_states()) {
    throw ModelError("MixturePolicy: component shapes differ");
  }
  first.validate(defer_action);
  second.validate(defer_action);
}

ValueTable::ValueTable(std::size_t horizon, std::size_t num_states)
    : horizon_(horizon), num_states_(num_states), values_((horizon + 1) * num_states, 0.0) {}

QTable::QTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      values_(horizon * num_states * num_actions, 0.0) {}

Action tie_broken_argmax(std::span<const double> values) {
  const double best = *std::max_element(values.begin(), values.end());
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] >= best - kTieTolerance) return static_cast<Action>(a);
  }
  return 0;
}

}  // namespace advice
