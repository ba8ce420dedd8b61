#include "advice/pertinence.hpp"

#include <cmath>
#include <sstream>

namespace advice {

namespace {

void check_beta(const MachineMDP& m, double beta) {
  if (!(beta >= 0.0 && beta < static_cast<double>(m.horizon()))) {
    std::ostringstream msg;
    msg << "beta = " << beta << " must lie in [0, H=" << m.horizon() << ")";
    throw std::invalid_argument(msg.str());
  }
}

MachineMDP penalize(const MachineMDP& m, double beta) {
  std::vector<double> rewards(m.rewards().begin(), m.rewards().end());
  if (beta != 0.0) {
    const std::size_t num_actions = m.num_actions();
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      if (i % num_actions != m.defer()) rewards[i] -= beta;
    }
  }
  return m.with_rewards(std::move(rewards));
}

PenalizedSolution solve_at(const MachineMDP& m, double beta) {
  PlanningResult plan = backward_induction(penalize(m, beta));
  PenalizedSolution out;
  out.value = plan.v(0, m.initial_state());
  out.unpenalized_value = initial_value(m, plan.policy);
  out.advice_count = expected_advice_count(m, plan.policy);
  out.policy = std::move(plan.policy);
  return out;
}

}  // namespace

MachineMDP penalized_machine_mdp(const MachineMDP& m, PenaltyConfig cfg) {
  if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) {
    throw std::invalid_argument("penalty beta must be a finite non-negative number");
  }
  return penalize(m, cfg.beta);
}

PenalizedSolution solve_penalized(const MachineMDP& m, PenaltyConfig cfg) {
  check_beta(m, cfg.beta);
  return solve_at(m, cfg.beta);
}

std::vector<GapViolation> criticalness_gap_check(const MachineMDP& m,
                                                 const ValueTable& human_values,
                                                 const DeterministicPolicy& policy_beta,
                                                 double beta) {
  if (human_values.horizon() != m.horizon() || human_values.num_states() != m.num_states() ||
      policy_beta.horizon() != m.horizon() || policy_beta.num_states() != m.num_states()) {
    throw std::invalid_argument("criticalness_gap_check: dimensions do not match the MDP");
  }
  const PlanningResult optimal = backward_induction(m);
  std::vector<GapViolation> violations;
  for (std::size_t h = 0; h < m.horizon(); ++h) {
    for (State s = 0; s < m.num_states(); ++s) {
      const Action a = policy_beta(h, s);
      if (a == m.defer()) continue;
      const double gap = optimal.q(h, s, a) - human_values(h, s);
      if (gap < beta - kValueTolerance) violations.push_back({h, s, a, gap});
    }
  }
  return violations;
}

BetaSweepResult beta_sweep(const MachineMDP& m, std::span<const double> betas) {
  BetaSweepResult out;
  out.reserve(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    check_beta(m, betas[i]);
    if (i > 0 && betas[i] < betas[i - 1]) {
      throw std::invalid_argument("beta_sweep: betas must be sorted ascending");
    }
  }
  for (double beta : betas) {
    PenalizedSolution sol = solve_at(m, beta);
    out.push_back({beta, std::move(sol.policy), sol.value, sol.unpenalized_value,
                   sol.advice_count});
  }
  return out;
}

CmdpSolution solve_cmdp_dual(const MachineMDP& m, const BudgetConfig& cfg) {
  const double H = static_cast<double>(m.horizon());
  if (!(cfg.budget > 0.0 && cfg.budget < H)) {
    std::ostringstream msg;
    msg << "advice budget D = " << cfg.budget << " must lie in (0, H=" << m.horizon() << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(cfg.beta_tolerance > 0.0) || cfg.max_iterations <= 0) {
    throw std::invalid_argument("bisection tolerance and iteration cap must be positive");
  }
  const double D = cfg.budget;

  PenalizedSolution low = solve_at(m, 0.0);
  if (low.advice_count <= D) {
    return {MixturePolicy::pure(low.policy), low.unpenalized_value, low.advice_count, 0.0, 0.0};
  }

  double beta_low = 0.0;
  double beta_high = H;
  PenalizedSolution high = solve_at(m, beta_high);
  if (high.advice_count > D) {
    // At beta = H an advice can still tie with deferring; past H it never pays.
    beta_high = H + 1.0;
    high = solve_at(m, beta_high);
  }

  int iterations = 0;
  while (beta_high - beta_low > cfg.beta_tolerance) {
    if (iterations == cfg.max_iterations) {
      std::ostringstream msg;
      msg << "dual bisection did not reach tolerance " << cfg.beta_tolerance << " in "
          << cfg.max_iterations << " iterations; bracket [" << beta_low << ", " << beta_high
          << "]";
      throw BisectionError(msg.str(), beta_low, beta_high);
    }
    const double mid = 0.5 * (beta_low + beta_high);
    PenalizedSolution sol = solve_at(m, mid);
    if (sol.advice_count > D) {
      beta_low = mid;
      low = std::move(sol);
    } else {
      beta_high = mid;
      high = std::move(sol);
    }
    ++iterations;
  }

  // low.advice_count > D >= high.advice_count
  const double q = (D - high.advice_count) / (low.advice_count - high.advice_count);
  CmdpSolution out;
  out.policy = MixturePolicy{low.policy, high.policy, q};
  out.value = q * low.unpenalized_value + (1.0 - q) * high.unpenalized_value;
  out.advice_count = q * low.advice_count + (1.0 - q) * high.advice_count;
  out.beta_low = beta_low;
  out.beta_high = beta_high;
  return out;
}

std::size_t advised_state_steps(const MachineMDP& m, const DeterministicPolicy& policy) {
  const OccupancyMeasure mu = occupancy_measures(m, policy);
  std::size_t count = 0;
  for (std::size_t h = 0; h < m.horizon(); ++h) {
    for (State s = 0; s < m.num_states(); ++s) {
      const Action a = policy(h, s);
      if (a != m.defer() && mu(h, s, a) > 0.0) ++count;
    }
  }
  return count;
}

std::size_t advised_state_steps(const MachineMDP& m, const MixturePolicy& policy) {
  if (policy.q == 1.0) return advised_state_steps(m, policy.first);
  if (policy.q == 0.0) return advised_state_steps(m, policy.second);
  const OccupancyMeasure first = occupancy_measures(m, policy.first);
  const OccupancyMeasure second = occupancy_measures(m, policy.second);
  std::size_t count = 0;
  for (std::size_t h = 0; h < m.horizon(); ++h) {
    for (State s = 0; s < m.num_states(); ++s) {
      const Action a1 = policy.first(h, s);
      const Action a2 = policy.second(h, s);
      const bool advised = (a1 != m.defer() && first(h, s, a1) > 0.0) ||
                           (a2 != m.defer() && second(h, s, a2) > 0.0);
      if (advised) ++count;
    }
  }
  return count;
}

}  // namespace advice
