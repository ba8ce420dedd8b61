#include "advice/envs/car.hpp"

#include <cmath>
#include <vector>

namespace advice::envs {

namespace {

constexpr std::size_t kRowPatterns = 27;  // 3^3 types of one row

std::size_t row_pattern(std::size_t window, std::size_t row) {
  return row == 0 ? window % kRowPatterns : window / kRowPatterns;
}

/// Lane reached by `a` from `lane`, or -1 when the move leaves the road.
long target_lane(std::size_t lane, Action a) {
  const long l = static_cast<long>(lane) + static_cast<long>(a) - 1;
  return (l < 0 || l >= static_cast<long>(kCarLanes)) ? -1 : l;
}

bool move_is_safe(std::size_t lane, std::size_t window, Action a) {
  const long l = target_lane(lane, a);
  return l >= 0 && car_window_cell(window, 0, static_cast<std::size_t>(l)) != CarCell::car;
}

}  // namespace

void CarConfig::validate() const {
  if (horizon == 0) throw ModelError("car horizon must be positive");
  double total = 0.0;
  for (double p : cell_distribution) {
    if (!(p >= 0.0)) throw ModelError("car cell distribution has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw ModelError("car cell distribution does not sum to one");
  }
  for (double r : cell_reward) {
    if (!(r >= 0.0 && r <= 1.0)) throw ModelError("car cell rewards must lie in [0, 1]");
  }
  if (!(straight_adherence >= 0.0 && straight_adherence <= 1.0) ||
      !(turn_adherence >= 0.0 && turn_adherence <= 1.0)) {
    throw ModelError("adherence levels must lie in [0, 1]");
  }
}

State car_state(std::size_t lane, std::size_t window) {
  return static_cast<State>(lane * kCarWindows + window);
}

State car_dead_state() { return static_cast<State>(kCarLanes * kCarWindows); }

std::size_t car_window(const std::array<CarCell, 3>& next_row,
                       const std::array<CarCell, 3>& row_after) {
  std::size_t code = 0;
  std::size_t place = 1;
  for (CarCell c : next_row) {
    code += place * static_cast<std::size_t>(c);
    place *= 3;
  }
  for (CarCell c : row_after) {
    code += place * static_cast<std::size_t>(c);
    place *= 3;
  }
  return code;
}

CarCell car_window_cell(std::size_t window, std::size_t row, std::size_t lane) {
  std::size_t digits = row_pattern(window, row);
  for (std::size_t i = 0; i < lane; ++i) digits /= 3;
  return static_cast<CarCell>(digits % 3);
}

TabularMDP car_mdp(const CarConfig& cfg) {
  cfg.validate();
  const std::size_t H = cfg.horizon;
  const std::size_t S = kCarStates;
  const std::size_t A = kCarLanes;
  const State dead = car_dead_state();

  std::array<double, kRowPatterns> entering{};
  for (std::size_t p = 0; p < kRowPatterns; ++p) {
    entering[p] = cfg.cell_distribution[p % 3] * cfg.cell_distribution[(p / 3) % 3] *
                  cfg.cell_distribution[p / 9];
  }

  // one layer of rows and rewards, repeated for every step
  std::vector<std::vector<Transition>> rows(S * A);
  std::vector<double> layer_rewards(S * A, 0.0);
  for (std::size_t lane = 0; lane < kCarLanes; ++lane) {
    for (std::size_t window = 0; window < kCarWindows; ++window) {
      const State s = car_state(lane, window);
      for (Action a = 0; a < A; ++a) {
        std::vector<Transition>& row = rows[s * A + a];
        const long l = target_lane(lane, a);
        if (l < 0) {
          row.push_back({dead, 1.0});
          continue;
        }
        const CarCell cell = car_window_cell(window, 0, static_cast<std::size_t>(l));
        if (cell == CarCell::car) {
          row.push_back({dead, 1.0});
          continue;
        }
        layer_rewards[s * A + a] = cfg.cell_reward[static_cast<std::size_t>(cell)];
        const std::size_t shifted = row_pattern(window, 1);
        for (std::size_t p = 0; p < kRowPatterns; ++p) {
          if (entering[p] == 0.0) continue;
          row.push_back({car_state(static_cast<std::size_t>(l), shifted + kRowPatterns * p),
                         entering[p]});
        }
      }
    }
  }
  for (Action a = 0; a < A; ++a) rows[dead * A + a].push_back({dead, 1.0});

  TransitionKernel kernel(H, S, A);
  std::vector<double> rewards;
  rewards.reserve(H * S * A);
  for (std::size_t h = 0; h < H; ++h) {
    for (const auto& row : rows) kernel.append_row(row);
    rewards.insert(rewards.end(), layer_rewards.begin(), layer_rewards.end());
  }
  return TabularMDP(S, A, H, car_state(1, 0), std::move(kernel), std::move(rewards));
}

HumanPolicy car_policy(const CarConfig& cfg) {
  const std::size_t H = cfg.horizon;
  const std::size_t S = kCarStates;
  const std::size_t A = kCarLanes;
  std::vector<double> layer(S * A, 1.0 / static_cast<double>(A));
  for (std::size_t lane = 0; lane < kCarLanes; ++lane) {
    for (std::size_t window = 0; window < kCarWindows; ++window) {
      double* row = layer.data() + car_state(lane, window) * A;
      std::size_t safe = 0;
      for (Action a = 0; a < A; ++a) safe += move_is_safe(lane, window, a) ? 1 : 0;
      if (safe == 0) continue;
      for (Action a = 0; a < A; ++a) {
        row[a] = move_is_safe(lane, window, a) ? 1.0 / static_cast<double>(safe) : 0.0;
      }
    }
  }
  std::vector<double> probs;
  probs.reserve(H * S * A);
  for (std::size_t h = 0; h < H; ++h) probs.insert(probs.end(), layer.begin(), layer.end());
  return HumanPolicy(H, S, A, std::move(probs));
}

Environment build_car(const CarConfig& cfg) {
  TabularMDP mdp = car_mdp(cfg);
  HumanPolicy pi = car_policy(cfg);
  std::vector<double> theta(kCarStates * kCarLanes, cfg.turn_adherence);
  for (State s = 0; s < kCarStates; ++s) {
    theta[s * kCarLanes + static_cast<Action>(CarAction::straight)] = cfg.straight_adherence;
  }
  AdherenceModel adherence(kCarStates, kCarLanes, std::move(theta));
  return {std::move(mdp), std::move(pi), std::move(adherence)};
}

}  // namespace advice::envs
