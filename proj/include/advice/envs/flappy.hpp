#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advice/envs/environment.hpp"

namespace advice::envs {

enum class Cell : std::uint8_t { empty, star, wall };

/**
 * Rectangular map, one text line per grid row from top to bottom using
 * '.' (empty), '*' (star) and '#' (wall). Row 0 is the top row.
 */
class GridMap {
 public:
  GridMap(std::size_t width, std::size_t height, std::vector<Cell> cells);

  /// Throws ModelError naming the line and column of the first bad glyph or ragged row.
  static GridMap parse(std::string_view text);
  static GridMap load(const std::filesystem::path& path);
  /// The three-phase 7 x 20 map: stars only, then mostly walls, then both.
  static GridMap default_map();

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Cell at(std::size_t x, std::size_t y) const { return cells_[y * width_ + x]; }

  std::string to_string() const;

  bool operator==(const GridMap&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<Cell> cells_;
};

enum class FlappyAction : Action { up = 0, up_up = 1, down = 2 };
inline constexpr std::size_t kFlappyActions = 3;

enum class HumanPolicyKind { greedy, safe };

struct FlappyConfig {
  GridMap map = GridMap::default_map();
  std::size_t start_row = 3;  // in column 0
  HumanPolicyKind human_policy = HumanPolicyKind::greedy;
  double adherence = 0.9;
  double aggressive_adherence = 0.7;  // for Up-Up
};

/**
 * Bird at (x, y) is state x * height + y; the absorbing dead state is
 * width * height. Every action moves one column right and shifts the row
 * (Up -1, Up-Up -2, Down +1). Leaving the grid or hitting a wall leads to
 * the dead state; entering a star pays 1. H = width.
 */
TabularMDP flappy_mdp(const FlappyConfig& cfg);

/// Uniform over actions that land on a star in the next column, else zig-zag.
HumanPolicy policy_greedy(const GridMap& map);
/// Uniform over actions that survive the next column, else zig-zag.
HumanPolicy policy_safe(const GridMap& map);

/// Zig-zag fallback: Up at even 0-based steps, Down at odd ones.
FlappyAction zigzag_action(std::size_t h);

Environment build_flappy(const FlappyConfig& cfg);

State flappy_state(const GridMap& map, std::size_t x, std::size_t y);
State flappy_dead_state(const GridMap& map);

}  // namespace advice::envs
