#pragma once

#include <span>
#include <vector>

#include "advice/common.hpp"

namespace advice {

struct Transition {
  State next;
  double prob;

  bool operator==(const Transition&) const = default;
};

/**
 * Time-dependent sparse transition kernel stored row-compressed.
 *
 * One row per (h, s, a), appended in lexicographic order. A row is either an
 * explicit list of successors or the implicit uniform distribution over all
 * states, which keeps empirical models with many unvisited pairs small.
 */
class TransitionKernel {
 public:
  TransitionKernel() = default;
  TransitionKernel(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

  /// Appends the next row. Entries are sorted, duplicates merged and zeros dropped.
  void append_row(std::span<const Transition> entries);
  void append_uniform_row();

  bool complete() const { return uniform_.size() == num_rows(); }

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_rows() const { return horizon_ * num_states_ * num_actions_; }

  std::span<const Transition> row(std::size_t h, State s, Action a) const;
  bool is_uniform(std::size_t h, State s, Action a) const { return uniform_[index(h, s, a)] != 0; }

  /// E[values(s')] under row (h, s, a). `uniform_mean` must be the mean of
  /// `values`; it is only read for uniform rows.
  double expectation(std::size_t h, State s, Action a, std::span<const double> values,
                     double uniform_mean) const;

  /// Probability of s' under row (h, s, a).
  double probability(std::size_t h, State s, Action a, State next) const;

  /// Checks every row sums to one within `tolerance`; throws ModelError naming the row.
  void validate(double tolerance) const;

  bool operator==(const TransitionKernel&) const = default;

 private:
  std::size_t index(std::size_t h, State s, Action a) const {
    return (h * num_states_ + s) * num_actions_ + a;
  }

  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Transition> entries_;
  std::vector<std::uint8_t> uniform_;
};

double mean_of(std::span<const double> values);

}  // namespace advice
