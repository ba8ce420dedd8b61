#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "advice/kernel.hpp"

namespace advice::testing {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Random probability vector; `sparse` zeroes some entries, `one_hot_chance`
/// returns a unit vector.
std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double one_hot_chance,
                                   bool sparse) {
  std::vector<double> out(n, 0.0);
  if (unit(rng) < one_hot_chance) {
    out[uniform_index(rng, 0, n - 1)] = 1.0;
    return out;
  }
  double total = 0.0;
  for (auto& x : out) {
    x = (sparse && unit(rng) < 0.3) ? 0.0 : -std::log(1.0 - unit(rng));
    total += x;
  }
  if (total == 0.0) {
    out[uniform_index(rng, 0, n - 1)] = 1.0;
    return out;
  }
  for (auto& x : out) x /= total;
  return out;
}

double random_unit_value(std::mt19937_64& rng) {
  const double pick = unit(rng);
  if (pick < 0.05) return 0.0;
  if (pick < 0.10) return 1.0;
  return unit(rng);
}

}  // namespace

envs::Environment DenseInstance::to_environment() const {
  TransitionKernel kernel(H, S, A);
  std::vector<Transition> row;
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        row.clear();
        for (std::size_t n = 0; n < S; ++n) {
          if (P(h, s, a, n) > 0.0) row.push_back({static_cast<State>(n), P(h, s, a, n)});
        }
        kernel.append_row(row);
      }
    }
  }
  TabularMDP mdp(S, A, H, static_cast<State>(s1), std::move(kernel), r);
  return {std::move(mdp), HumanPolicy(H, S, A, pi), AdherenceModel(S, A, theta)};
}

DenseInstance random_instance(std::mt19937_64& rng, std::size_t S, std::size_t A,
                              std::size_t H) {
  DenseInstance inst;
  inst.S = S;
  inst.A = A;
  inst.H = H;
  inst.s1 = uniform_index(rng, 0, S - 1);
  for (std::size_t i = 0; i < H * S * A; ++i) {
    const auto row = random_simplex(rng, S, 0.25, true);
    inst.p.insert(inst.p.end(), row.begin(), row.end());
    inst.r.push_back(random_unit_value(rng));
  }
  for (std::size_t i = 0; i < H * S; ++i) {
    const auto row = random_simplex(rng, A, 0.2, false);
    inst.pi.insert(inst.pi.end(), row.begin(), row.end());
  }
  for (std::size_t i = 0; i < S * A; ++i) inst.theta.push_back(random_unit_value(rng));
  return inst;
}

DenseInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  const std::size_t S = uniform_index(rng, shape.min_states, shape.max_states);
  const std::size_t A = uniform_index(rng, shape.min_actions, shape.max_actions);
  const std::size_t H = uniform_index(rng, shape.min_horizon, shape.max_horizon);
  return random_instance(rng, S, A, H);
}

std::vector<double> response_oracle(const DenseInstance& inst, std::size_t h, std::size_t s,
                                    std::size_t machine_action) {
  std::vector<double> out(inst.A, 0.0);
  if (machine_action == inst.A) {
    for (std::size_t a = 0; a < inst.A; ++a) out[a] = inst.Pi(h, s, a);
    return out;
  }
  const double advised = inst.Pi(h, s, machine_action);
  if (advised == 1.0) {
    out[machine_action] = 1.0;
    return out;
  }
  const double theta = inst.Theta(s, machine_action);
  for (std::size_t a = 0; a < inst.A; ++a) {
    out[a] = a == machine_action ? theta : (1.0 - theta) * inst.Pi(h, s, a) / (1.0 - advised);
  }
  return out;
}

DenseMachine dense_machine(const DenseInstance& inst) {
  DenseMachine m;
  m.S = inst.S;
  m.A = inst.A + 1;
  m.H = inst.H;
  m.s1 = inst.s1;
  m.p.assign(m.H * m.S * m.A * m.S, 0.0);
  m.r.assign(m.H * m.S * m.A, 0.0);
  for (std::size_t h = 0; h < m.H; ++h) {
    for (std::size_t s = 0; s < m.S; ++s) {
      for (std::size_t am = 0; am < m.A; ++am) {
        const auto q = response_oracle(inst, h, s, am);
        double reward = 0.0;
        for (std::size_t a = 0; a < inst.A; ++a) {
          reward += q[a] * inst.R(h, s, a);
          for (std::size_t n = 0; n < m.S; ++n) {
            m.p[((h * m.S + s) * m.A + am) * m.S + n] += q[a] * inst.P(h, s, a, n);
          }
        }
        m.r[(h * m.S + s) * m.A + am] = reward;
      }
    }
  }
  return m;
}

DenseMachine penalized(DenseMachine m, double beta) {
  for (std::size_t h = 0; h < m.H; ++h) {
    for (std::size_t s = 0; s < m.S; ++s) {
      for (std::size_t am = 0; am + 1 < m.A; ++am) m.r[(h * m.S + s) * m.A + am] -= beta;
    }
  }
  return m;
}

PolicyStats evaluate_dense(const DenseMachine& m, const std::vector<std::size_t>& act) {
  std::vector<double> value(m.S, 0.0);
  std::vector<double> advice(m.S, 0.0);
  std::vector<double> next_value(m.S);
  std::vector<double> next_advice(m.S);
  for (std::size_t h = m.H; h-- > 0;) {
    for (std::size_t s = 0; s < m.S; ++s) {
      const std::size_t a = act[h * m.S + s];
      double v = m.R(h, s, a);
      double c = a + 1 == m.A ? 0.0 : 1.0;
      for (std::size_t n = 0; n < m.S; ++n) {
        v += m.P(h, s, a, n) * value[n];
        c += m.P(h, s, a, n) * advice[n];
      }
      next_value[s] = v;
      next_advice[s] = c;
    }
    value.swap(next_value);
    advice.swap(next_advice);
  }
  return {value[m.s1], advice[m.s1]};
}

std::vector<PolicyStats> enumerate_policies(const DenseMachine& m) {
  const std::size_t cells = m.H * m.S;
  std::vector<std::size_t> act(cells, 0);
  std::vector<PolicyStats> out;
  while (true) {
    out.push_back(evaluate_dense(m, act));
    std::size_t i = 0;
    while (i < cells && ++act[i] == m.A) act[i++] = 0;
    if (i == cells) break;
  }
  return out;
}

double enumerated_optimum(const DenseMachine& m) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& st : enumerate_policies(m)) best = std::max(best, st.value);
  return best;
}

double enumerated_cmdp_value(const DenseMachine& m, double budget) {
  auto points = enumerate_policies(m);
  std::sort(points.begin(), points.end(), [](const PolicyStats& x, const PolicyStats& y) {
    return x.advice != y.advice ? x.advice < y.advice : x.value < y.value;
  });
  std::vector<PolicyStats> hull;
  for (const auto& pt : points) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross =
          (a.advice - o.advice) * (pt.value - o.value) -
          (a.value - o.value) * (pt.advice - o.advice);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (hull[i].advice <= budget) best = std::max(best, hull[i].value);
    if (i + 1 < hull.size() && hull[i].advice <= budget && budget < hull[i + 1].advice) {
      const double q = (hull[i + 1].advice - budget) / (hull[i + 1].advice - hull[i].advice);
      best = std::max(best, q * hull[i].value + (1.0 - q) * hull[i + 1].value);
    }
  }
  return best;
}

MonteCarloStats monte_carlo(const DenseInstance& inst, const DeterministicPolicy& policy,
                            std::size_t episodes, std::uint64_t seed) {
  const std::size_t AM = inst.A + 1;
  MonteCarloStats out;
  out.occupancy.assign(inst.H * inst.S * AM, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](const std::vector<double>& probs) {
    double x = u(rng);
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      if (x < probs[i]) return i;
      x -= probs[i];
    }
    return probs.size() - 1;
  };
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> next(inst.S);
  for (std::size_t e = 0; e < episodes; ++e) {
    std::size_t s = inst.s1;
    double advice = 0.0;
    for (std::size_t h = 0; h < inst.H; ++h) {
      const std::size_t am = policy(h, static_cast<State>(s));
      out.occupancy[(h * inst.S + s) * AM + am] += 1.0;
      if (am != inst.A) advice += 1.0;
      const std::size_t a = draw(response_oracle(inst, h, s, am));
      for (std::size_t n = 0; n < inst.S; ++n) next[n] = inst.P(h, s, a, n);
      s = draw(next);
    }
    sum += advice;
    sum_sq += advice * advice;
  }
  const double n = static_cast<double>(episodes);
  for (auto& x : out.occupancy) x /= n;
  out.advice_mean = sum / n;
  out.advice_variance = sum_sq / n - out.advice_mean * out.advice_mean;
  return out;
}

}  // namespace advice::testing
