#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "advice/machine.hpp"
#include "advice/planning.hpp"
#include "advice/policy.hpp"

namespace advice {

/// Per-advice penalty in reward units, 0 <= beta < H.
struct PenaltyConfig {
  double beta = 0.0;
};

/// Expected advice budget 0 < D < H and the dual bisection controls.
struct BudgetConfig {
  double budget = 1.0;
  double beta_tolerance = 1e-6;
  int max_iterations = 80;
};

/// Subtracts beta from every advising action's reward. Defer rewards and the
/// kernel are shared unchanged. Rewards may become negative.
MachineMDP penalized_machine_mdp(const MachineMDP& m, PenaltyConfig cfg);

struct PenalizedSolution {
  DeterministicPolicy policy;
  double value = 0.0;               // V*_beta(s1), penalized
  double unpenalized_value = 0.0;   // V^pi(s1) on the original rewards
  double advice_count = 0.0;
};

PenalizedSolution solve_penalized(const MachineMDP& m, PenaltyConfig cfg);

struct GapViolation {
  std::size_t step;
  State state;
  Action action;
  double gap;
};

/**
 * Reports every (h, s) where `policy_beta` advises but the improvement
 * Q*_h(s, a) - V^{pi^H}_h(s) of that advice (followed by optimal play on the
 * unpenalized model) falls short of beta by more than kValueTolerance.
 */
std::vector<GapViolation> criticalness_gap_check(const MachineMDP& m,
                                                 const ValueTable& human_values,
                                                 const DeterministicPolicy& policy_beta,
                                                 double beta);

struct BetaSweepEntry {
  double beta = 0.0;
  DeterministicPolicy policy;
  double value = 0.0;
  double unpenalized_value = 0.0;
  double advice_count = 0.0;
};

using BetaSweepResult = std::vector<BetaSweepEntry>;

/// One penalized solve per beta; `betas` must be ascending within [0, H).
BetaSweepResult beta_sweep(const MachineMDP& m, std::span<const double> betas);

struct CmdpSolution {
  MixturePolicy policy;
  double value = 0.0;         // unpenalized value of the mixture at s1
  double advice_count = 0.0;  // expected advice count of the mixture
  double beta_low = 0.0;      // final bracket; equal when the constraint is inactive
  double beta_high = 0.0;
};

class BisectionError : public std::runtime_error {
 public:
  BisectionError(const std::string& what, double low, double high)
      : std::runtime_error(what), low_(low), high_(high) {}
  double low() const { return low_; }
  double high() const { return high_; }

 private:
  double low_;
  double high_;
};

/**
 * max_pi V^pi(s1) s.t. E^pi[#advice] <= D, solved through the Lagrangian
 * penalty: bisect beta until the advice counts of the beta-optimal policies
 * straddle D, then mix the bracketing pair so the expected count equals D.
 */
CmdpSolution solve_cmdp_dual(const MachineMDP& m, const BudgetConfig& cfg);

/// Number of reachable (h, s) pairs at which the policy advises.
std::size_t advised_state_steps(const MachineMDP& m, const DeterministicPolicy& policy);
std::size_t advised_state_steps(const MachineMDP& m, const MixturePolicy& policy);

}  // namespace advice
