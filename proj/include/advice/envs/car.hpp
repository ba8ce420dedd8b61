#pragma once

#include <array>
#include <cstdint>

#include "advice/envs/environment.hpp"

namespace advice::envs {

enum class CarCell : std::uint8_t { empty = 0, stone = 1, car = 2 };
enum class CarAction : Action { left = 0, straight = 1, right = 2 };

inline constexpr std::size_t kCarLanes = 3;
inline constexpr std::size_t kCarWindows = 729;  // 3^6 type patterns of the next two rows
inline constexpr std::size_t kCarStates = kCarLanes * kCarWindows + 1;

struct CarConfig {
  std::size_t horizon = 10;
  std::array<double, 3> cell_distribution{0.4, 0.3, 0.3};  // empty, stone, car
  std::array<double, 3> cell_reward{1.0, 0.5, 0.0};
  double straight_adherence = 0.9;
  double turn_adherence = 0.7;

  void validate() const;
};

/// Lane and next-two-row window packed into a state index. Window digit i
/// (base 3) is lane i of the next row for i < 3 and lane i - 3 of the row
/// after it.
State car_state(std::size_t lane, std::size_t window);
State car_dead_state();
std::size_t car_window(const std::array<CarCell, 3>& next_row,
                       const std::array<CarCell, 3>& row_after);
CarCell car_window_cell(std::size_t window, std::size_t row, std::size_t lane);

/**
 * The car moves laterally (leaving the road is fatal), lands on the next
 * row's cell in its new lane and collects its reward; a car there is fatal.
 * The window then scrolls and a fresh i.i.d. row enters. Starts in the middle
 * lane with an empty window.
 */
TabularMDP car_mdp(const CarConfig& cfg);

/// Myopic driver: uniform over moves whose landing cell is on the road and
/// free of cars, uniform over all moves when none is.
HumanPolicy car_policy(const CarConfig& cfg);

Environment build_car(const CarConfig& cfg);

}  // namespace advice::envs
