#pragma once

#include <span>
#include <vector>

#include "advice/common.hpp"

namespace advice {

/// act[h][s]: machine action (index A means defer).
class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  DeterministicPolicy(std::size_t horizon, std::size_t num_states, Action fill);
  DeterministicPolicy(std::size_t horizon, std::size_t num_states, std::vector<Action> actions);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }

  Action operator()(std::size_t h, State s) const { return actions_[h * num_states_ + s]; }
  Action& operator()(std::size_t h, State s) { return actions_[h * num_states_ + s]; }
  std::span<const Action> actions() const { return actions_; }

  /// Throws ModelError if any entry exceeds `defer_action`.
  void validate(Action defer_action) const;

  bool operator==(const DeterministicPolicy&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::vector<Action> actions_;
};

/// At episode start play `first` with probability q, otherwise `second`.
struct MixturePolicy {
  DeterministicPolicy first;
  DeterministicPolicy second;
  double q = 1.0;

  static MixturePolicy pure(DeterministicPolicy policy);
  void validate(Action defer_action) const;
};

/// V[h][s] for h = 0..H; the terminal layer V[H] is identically zero.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(std::size_t horizon, std::size_t num_states);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }

  double operator()(std::size_t h, State s) const { return values_[h * num_states_ + s]; }
  double& operator()(std::size_t h, State s) { return values_[h * num_states_ + s]; }
  std::span<const double> layer(std::size_t h) const {
    return {values_.data() + h * num_states_, num_states_};
  }

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::vector<double> values_;
};

/// Q[h][s][a] for h = 0..H-1 over the machine action set.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

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
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

/// mu[h][s][a]: probability that step h occupies (s, a).
using OccupancyMeasure = QTable;

/// Lowest index whose value is within kTieTolerance of the maximum.
Action tie_broken_argmax(std::span<const double> values);

}  // namespace advice
