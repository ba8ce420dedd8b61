#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "advice/envs/environment.hpp"
#include "advice/policy.hpp"

namespace advice::testing {

/// Dense human-side instance; the oracles below read only these arrays.
struct DenseInstance {
  std::size_t S = 0;
  std::size_t A = 0;
  std::size_t H = 0;
  std::size_t s1 = 0;
  std::vector<double> p;      // [h][s][a][s']
  std::vector<double> r;      // [h][s][a]
  std::vector<double> pi;     // [h][s][a]
  std::vector<double> theta;  // [s][a]

  double P(std::size_t h, std::size_t s, std::size_t a, std::size_t n) const {
    return p[((h * S + s) * A + a) * S + n];
  }
  double R(std::size_t h, std::size_t s, std::size_t a) const { return r[(h * S + s) * A + a]; }
  double Pi(std::size_t h, std::size_t s, std::size_t a) const {
    return pi[(h * S + s) * A + a];
  }
  double Theta(std::size_t s, std::size_t a) const { return theta[s * A + a]; }

  envs::Environment to_environment() const;
};

struct InstanceShape {
  std::size_t max_states = 3;
  std::size_t max_actions = 2;
  std::size_t max_horizon = 3;
  std::size_t min_states = 1;
  std::size_t min_actions = 1;
  std::size_t min_horizon = 1;
};

/// Random instance with sparse rows, occasional one-hot human rows and
/// occasional deterministic transitions.
DenseInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape);

/// Fixed-size variant.
DenseInstance random_instance(std::mt19937_64& rng, std::size_t S, std::size_t A, std::size_t H);

/// Machine-side dense arrays with A + 1 actions, defer last.
struct DenseMachine {
  std::size_t S = 0;
  std::size_t A = 0;  // machine actions, including defer
  std::size_t H = 0;
  std::size_t s1 = 0;
  std::vector<double> p;  // [h][s][aM][s']
  std::vector<double> r;  // [h][s][aM]

  double P(std::size_t h, std::size_t s, std::size_t a, std::size_t n) const {
    return p[((h * S + s) * A + a) * S + n];
  }
  double R(std::size_t h, std::size_t s, std::size_t a) const { return r[(h * S + s) * A + a]; }
};

/// The human's response distribution written out from the adherence law.
std::vector<double> response_oracle(const DenseInstance& inst, std::size_t h, std::size_t s,
                                    std::size_t machine_action);

DenseMachine dense_machine(const DenseInstance& inst);

/// Penalty beta on every advising action.
DenseMachine penalized(DenseMachine m, double beta);

struct PolicyStats {
  double value = 0.0;
  double advice = 0.0;
};

/// Value and expected advice count at s1 of a dense deterministic policy act[h * S + s].
PolicyStats evaluate_dense(const DenseMachine& m, const std::vector<std::size_t>& act);

/// Statistics of every deterministic Markov policy, in odometer order.
std::vector<PolicyStats> enumerate_policies(const DenseMachine& m);

/// max over enumerated policies of the value at s1.
double enumerated_optimum(const DenseMachine& m);

/// Best value among mixtures of two deterministic policies whose expected
/// advice count is at most `budget`, read off the upper concave hull of the
/// enumerated (count, value) points.
double enumerated_cmdp_value(const DenseMachine& m, double budget);

struct MonteCarloStats {
  std::vector<double> occupancy;  // [h][s][aM] frequencies
  double advice_mean = 0.0;
  double advice_variance = 0.0;
};

/// Frequencies from simulated episodes, sampled with the human-side arrays
/// and an independent generator.
MonteCarloStats monte_carlo(const DenseInstance& inst, const DeterministicPolicy& policy,
                            std::size_t episodes, std::uint64_t seed);

}  // namespace advice::testing
