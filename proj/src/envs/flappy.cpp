#include "advice/envs/flappy.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace advice::envs {

namespace {

constexpr std::string_view kDefaultMap =
    ".******##.#.##*#.#*.\n"
    ".******#.#.#.#..**##\n"
    ".*******#.#.#.**....\n"
    ".*******..##.##..**.\n"
    ".******#.#.##..*.*#*\n"
    ".*******###.##*####*\n"
    ".******###.#..#*#.**\n";

constexpr std::array<int, kFlappyActions> kRowShift{-1, -2, +1};

/// Landing cell of `a` from (x, y), or nullopt when the move is fatal.
std::optional<std::pair<std::size_t, std::size_t>> landing(const GridMap& map, std::size_t x,
                                                           std::size_t y, Action a) {
  const std::size_t nx = x + 1;
  const long ny = static_cast<long>(y) + kRowShift[a];
  if (nx >= map.width() || ny < 0 || ny >= static_cast<long>(map.height())) return std::nullopt;
  const auto uy = static_cast<std::size_t>(ny);
  if (map.at(nx, uy) == Cell::wall) return std::nullopt;
  return std::pair{nx, uy};
}

template <class Prefer>
HumanPolicy preference_policy(const GridMap& map, Prefer prefer) {
  const std::size_t H = map.width();
  const std::size_t S = map.width() * map.height() + 1;
  const std::size_t A = kFlappyActions;
  std::vector<double> probs(H * S * A, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    for (State s = 0; s < S; ++s) {
      double* row = probs.data() + (h * S + s) * A;
      if (s == S - 1) {
        for (std::size_t a = 0; a < A; ++a) row[a] = 1.0 / static_cast<double>(A);
        continue;
      }
      const std::size_t x = s / map.height();
      const std::size_t y = s % map.height();
      std::size_t chosen = 0;
      for (Action a = 0; a < A; ++a) {
        if (prefer(x, y, a)) {
          row[a] = 1.0;
          ++chosen;
        }
      }
      if (chosen == 0) {
        row[static_cast<Action>(zigzag_action(h))] = 1.0;
        continue;
      }
      for (std::size_t a = 0; a < A; ++a) row[a] /= static_cast<double>(chosen);
    }
  }
  return HumanPolicy(H, S, A, std::move(probs));
}

}  // namespace

GridMap::GridMap(std::size_t width, std::size_t height, std::vector<Cell> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width == 0 || height == 0) throw ModelError("map must have at least one row and column");
  if (cells_.size() != width * height) throw ModelError("map cell count does not match its size");
}

GridMap GridMap::parse(std::string_view text) {
  std::vector<Cell> cells;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (height == 0) width = line.size();
    if (line.size() != width) {
      throw ModelError("map line " + std::to_string(line_no) + " has " +
                       std::to_string(line.size()) + " cells, expected " + std::to_string(width));
    }
    for (std::size_t col = 0; col < line.size(); ++col) {
      switch (line[col]) {
        case '.': cells.push_back(Cell::empty); break;
        case '*': cells.push_back(Cell::star); break;
        case '#': cells.push_back(Cell::wall); break;
        default:
          throw ModelError("map line " + std::to_string(line_no) + " column " +
                           std::to_string(col + 1) + ": unknown glyph '" +
                           std::string(1, line[col]) + "'");
      }
    }
    ++height;
  }
  if (height == 0) throw ModelError("map is empty");
  return GridMap(width, height, std::move(cells));
}

GridMap GridMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ModelError& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

GridMap GridMap::default_map() { return parse(kDefaultMap); }

std::string GridMap::to_string() const {
  std::string out;
  out.reserve((width_ + 1) * height_);
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) {
      switch (at(x, y)) {
        case Cell::empty: out += '.'; break;
        case Cell::star: out += '*'; break;
        case Cell::wall: out += '#'; break;
      }
    }
    out += '\n';
  }
  return out;
}

State flappy_state(const GridMap& map, std::size_t x, std::size_t y) {
  return static_cast<State>(x * map.height() + y);
}

State flappy_dead_state(const GridMap& map) {
  return static_cast<State>(map.width() * map.height());
}

FlappyAction zigzag_action(std::size_t h) {
  return h % 2 == 0 ? FlappyAction::up : FlappyAction::down;
}

TabularMDP flappy_mdp(const FlappyConfig& cfg) {
  const GridMap& map = cfg.map;
  if (cfg.start_row >= map.height()) throw ModelError("start row lies outside the map");
  if (map.at(0, cfg.start_row) == Cell::wall) throw ModelError("start cell is a wall");

  const std::size_t H = map.width();
  const std::size_t S = map.width() * map.height() + 1;
  const std::size_t A = kFlappyActions;
  const State dead = flappy_dead_state(map);

  // dynamics do not depend on h: build one layer and repeat it
  std::vector<State> next(S * A, dead);
  std::vector<double> layer_rewards(S * A, 0.0);
  for (std::size_t x = 0; x < map.width(); ++x) {
    for (std::size_t y = 0; y < map.height(); ++y) {
      const State s = flappy_state(map, x, y);
      for (Action a = 0; a < A; ++a) {
        const auto cell = landing(map, x, y, a);
        if (!cell) continue;
        next[s * A + a] = flappy_state(map, cell->first, cell->second);
        layer_rewards[s * A + a] = map.at(cell->first, cell->second) == Cell::star ? 1.0 : 0.0;
      }
    }
  }

  TransitionKernel kernel(H, S, A);
  std::vector<double> rewards;
  rewards.reserve(H * S * A);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t i = 0; i < S * A; ++i) {
      const Transition t{next[i], 1.0};
      kernel.append_row({&t, 1});
    }
    rewards.insert(rewards.end(), layer_rewards.begin(), layer_rewards.end());
  }
  return TabularMDP(S, A, H, flappy_state(map, 0, cfg.start_row), std::move(kernel),
                    std::move(rewards));
}

HumanPolicy policy_greedy(const GridMap& map) {
  return preference_policy(map, [&](std::size_t x, std::size_t y, Action a) {
    const auto cell = landing(map, x, y, a);
    return cell && map.at(cell->first, cell->second) == Cell::star;
  });
}

HumanPolicy policy_safe(const GridMap& map) {
  return preference_policy(map, [&](std::size_t x, std::size_t y, Action a) {
    return landing(map, x, y, a).has_value();
  });
}

Environment build_flappy(const FlappyConfig& cfg) {
  if (!(cfg.adherence >= 0.0 && cfg.adherence <= 1.0) ||
      !(cfg.aggressive_adherence >= 0.0 && cfg.aggressive_adherence <= 1.0)) {
    throw ModelError("adherence levels must lie in [0, 1]");
  }
  TabularMDP mdp = flappy_mdp(cfg);
  HumanPolicy pi = cfg.human_policy == HumanPolicyKind::greedy ? policy_greedy(cfg.map)
                                                               : policy_safe(cfg.map);
  const std::size_t S = mdp.num_states();
  std::vector<double> theta(S * kFlappyActions, cfg.adherence);
  for (State s = 0; s < S; ++s) {
    theta[s * kFlappyActions + static_cast<Action>(FlappyAction::up_up)] =
        cfg.aggressive_adherence;
  }
  AdherenceModel adherence(S, kFlappyActions, std::move(theta));
  return {std::move(mdp), std::move(pi), std::move(adherence)};
}

}  // namespace advice::envs
