#include "advice/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace advice {

TransitionKernel::TransitionKernel(std::size_t horizon, std::size_t num_states,
                                   std::size_t num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  offsets_.reserve(num_rows() + 1);
  uniform_.reserve(num_rows());
}

void TransitionKernel::append_row(std::span<const Transition> entries) {
  if (complete()) throw ModelError("transition kernel: too many rows appended");

  std::vector<Transition> row(entries.begin(), entries.end());
  std::sort(row.begin(), row.end(),
            [](const Transition& x, const Transition& y) { return x.next < y.next; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].next >= num_states_) {
      throw ModelError("transition kernel: successor index " + std::to_string(row[i].next) +
                       " out of range");
    }
    if (out > 0 && row[out - 1].next == row[i].next) {
      row[out - 1].prob += row[i].prob;
    } else {
      row[out++] = row[i];
    }
  }
  row.resize(out);
  std::erase_if(row, [](const Transition& t) { return t.prob == 0.0; });

  entries_.insert(entries_.end(), row.begin(), row.end());
  offsets_.push_back(entries_.size());
  uniform_.push_back(0);
}

void TransitionKernel::append_uniform_row() {
  if (complete()) throw ModelError("transition kernel: too many rows appended");
  offsets_.push_back(entries_.size());
  uniform_.push_back(1);
}

std::span<const Transition> TransitionKernel::row(std::size_t h, State s, Action a) const {
  const std::size_t i = index(h, s, a);
  return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

double TransitionKernel::expectation(std::size_t h, State s, Action a,
                                     std::span<const double> values,
                                     double uniform_mean) const {
  if (is_uniform(h, s, a)) return uniform_mean;
  double acc = 0.0;
  for (const Transition& t : row(h, s, a)) acc += t.prob * values[t.next];
  return acc;
}

double TransitionKernel::probability(std::size_t h, State s, Action a, State next) const {
  if (is_uniform(h, s, a)) return 1.0 / static_cast<double>(num_states_);
  for (const Transition& t : row(h, s, a)) {
    if (t.next == next) return t.prob;
  }
  return 0.0;
}

void TransitionKernel::validate(double tolerance) const {
  if (!complete()) throw ModelError("transition kernel: missing rows");
  for (std::size_t h = 0; h < horizon_; ++h) {
    for (State s = 0; s < num_states_; ++s) {
      for (Action a = 0; a < num_actions_; ++a) {
        if (is_uniform(h, s, a)) continue;
        double sum = 0.0;
        for (const Transition& t : row(h, s, a)) {
          if (t.prob < 0.0 || !std::isfinite(t.prob)) {
            std::ostringstream msg;
            msg << "p[h=" << h << "][s=" << s << "][a=" << a << "][s'=" << t.next
                << "] is not a probability (" << t.prob << ")";
            throw ModelError(msg.str());
          }
          sum += t.prob;
        }
        if (std::abs(sum - 1.0) > tolerance) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "p[h=" << h << "][s=" << s << "][a=" << a << "] sums to " << sum;
          throw ModelError(msg.str());
        }
      }
    }
  }
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace advice
