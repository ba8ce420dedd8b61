#include "advice/mdp.hpp"

#include <cmath>
#include <sstream>

namespace advice {

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

TabularMDP::TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       State initial_state, TransitionKernel transitions,
                       std::vector<double> rewards)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      initial_state_(initial_state),
      transitions_(std::make_shared<const TransitionKernel>(std::move(transitions))),
      rewards_(std::move(rewards)) {
  if (num_states_ == 0 || num_actions_ == 0 || horizon_ == 0) {
    throw ModelError("TabularMDP: S, A and H must be positive");
  }
  if (initial_state_ >= num_states_) {
    throw ModelError("TabularMDP: s1=" + std::to_string(initial_state_) + " is not below S=" +
                     std::to_string(num_states_));
  }
  if (transitions_->horizon() != horizon_ || transitions_->num_states() != num_states_ ||
      transitions_->num_actions() != num_actions_) {
    throw ModelError("TabularMDP: transition kernel dimensions do not match (S, A, H)");
  }
  transitions_->validate(kHumanRowTolerance);
  if (rewards_.size() != horizon_ * num_states_ * num_actions_) {
    throw ModelError("TabularMDP: reward table has the wrong size");
  }
  for (std::size_t h = 0; h < horizon_; ++h) {
    for (State s = 0; s < num_states_; ++s) {
      for (Action a = 0; a < num_actions_; ++a) {
        const double r = reward(h, s, a);
        if (!is_probability(r)) {
          std::ostringstream msg;
          msg << "r[h=" << h << "][s=" << s << "][a=" << a << "] = " << r
              << " is outside [0, 1]";
          throw ModelError(msg.str());
        }
      }
    }
  }
}

bool TabularMDP::operator==(const TabularMDP& other) const {
  return num_states_ == other.num_states_ && num_actions_ == other.num_actions_ &&
         horizon_ == other.horizon_ && initial_state_ == other.initial_state_ &&
         *transitions_ == *other.transitions_ && rewards_ == other.rewards_;
}

HumanPolicy::HumanPolicy(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                         std::vector<double> probabilities)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      probs_(std::move(probabilities)) {
  if (probs_.size() != horizon_ * num_states_ * num_actions_) {
    throw ModelError("HumanPolicy: probability table has the wrong size");
  }
  for (std::size_t h = 0; h < horizon_; ++h) {
    for (State s = 0; s < num_states_; ++s) {
      double sum = 0.0;
      for (Action a = 0; a < num_actions_; ++a) {
        const double p = (*this)(h, s, a);
        if (!is_probability(p)) {
          std::ostringstream msg;
          msg << "pi[h=" << h << "][s=" << s << "][a=" << a << "] = " << p
              << " is not a probability";
          throw ModelError(msg.str());
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kHumanRowTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pi[h=" << h << "][s=" << s << "] sums to " << sum;
        throw ModelError(msg.str());
      }
    }
  }
}

AdherenceModel::AdherenceModel(std::size_t num_states, std::size_t num_actions,
                               std::vector<double> theta)
    : num_states_(num_states), num_actions_(num_actions), theta_(std::move(theta)) {
  if (theta_.size() != num_states_ * num_actions_) {
    throw ModelError("AdherenceModel: theta table has the wrong size");
  }
  for (State s = 0; s < num_states_; ++s) {
    for (Action a = 0; a < num_actions_; ++a) {
      const double t = (*this)(s, a);
      if (!is_probability(t)) {
        std::ostringstream msg;
        msg << "theta[s=" << s << "][a=" << a << "] = " << t << " is outside [0, 1]";
        throw ModelError(msg.str());
      }
    }
  }
}

AdherenceModel AdherenceModel::constant(std::size_t num_states, std::size_t num_actions,
                                        double value) {
  return AdherenceModel(num_states, num_actions,
                        std::vector<double>(num_states * num_actions, value));
}

std::vector<AdherenceViolation> adherence_below_policy(const HumanPolicy& pi,
                                                       const AdherenceModel& theta) {
  std::vector<AdherenceViolation> out;
  for (std::size_t h = 0; h < pi.horizon(); ++h) {
    for (State s = 0; s < pi.num_states(); ++s) {
      for (Action a = 0; a < pi.num_actions(); ++a) {
        if (theta(s, a) < pi(h, s, a)) out.push_back({h, s, a, theta(s, a), pi(h, s, a)});
      }
    }
  }
  return out;
}

void check_compatible(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta) {
  if (pi.horizon() != mdp.horizon() || pi.num_states() != mdp.num_states() ||
      pi.num_actions() != mdp.num_actions()) {
    throw ModelError("human policy dimensions do not match the MDP");
  }
  if (theta.num_states() != mdp.num_states() || theta.num_actions() != mdp.num_actions()) {
    throw ModelError("adherence model dimensions do not match the MDP");
  }
}

}  // namespace advice
