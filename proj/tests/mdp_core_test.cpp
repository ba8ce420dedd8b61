#include <cmath>
#include <numeric>
#include <random>

#include "advice/kernel.hpp"
#include "advice/machine.hpp"
#include "advice/mdp.hpp"
#include "advice/planning.hpp"
#include "advice/policy.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace advice;
using advice::testing::DenseInstance;

namespace {

DenseInstance two_state_instance() {
  // S = 2, A = 2, H = 1; action 0 stays, action 1 switches
  DenseInstance inst;
  inst.S = 2;
  inst.A = 2;
  inst.H = 1;
  inst.s1 = 0;
  inst.p = {1, 0, 0, 1, 0, 1, 1, 0};
  inst.r = {0.2, 0.8, 0.5, 0.1};
  inst.pi = {0.5, 0.5, 0.5, 0.5};
  inst.theta = {0.5, 0.5, 0.5, 0.5};
  return inst;
}

MachineMDP machine_of(const DenseInstance& inst) {
  const auto env = inst.to_environment();
  return build_machine_mdp(env.mdp, env.policy, env.adherence);
}

}  // namespace

TEST_CASE("kernel rows are sorted, merged and stripped of zeros") {
  TransitionKernel k(1, 3, 1);
  const Transition entries[] = {{2, 0.25}, {0, 0.5}, {2, 0.25}, {1, 0.0}};
  k.append_row(entries);
  CHECK_FALSE(k.complete());
  k.append_uniform_row();
  k.append_uniform_row();
  REQUIRE(k.complete());
  const auto row = k.row(0, 0, 0);
  REQUIRE(row.size() == 2);
  CHECK(row[0] == Transition{0, 0.5});
  CHECK(row[1] == Transition{2, 0.5});
  CHECK(k.probability(0, 0, 0, 1) == 0.0);
  k.validate(1e-10);
}

TEST_CASE("uniform rows read as 1/S everywhere") {
  TransitionKernel k(1, 4, 1);
  k.append_uniform_row();
  CHECK(k.is_uniform(0, 0, 0));
  CHECK(k.probability(0, 0, 0, 3) == doctest::Approx(0.25));
  const std::vector<double> values{1, 2, 3, 6};
  CHECK(k.expectation(0, 0, 0, values, mean_of(values)) == doctest::Approx(3.0));
}

TEST_CASE("kernel validation names the row that does not sum to one") {
  TransitionKernel k(1, 2, 1);
  const Transition entries[] = {{0, 0.5}, {1, 0.4}};
  k.append_row(entries);
  CHECK_THROWS_AS(k.validate(1e-10), ModelError);
}

TEST_CASE("model constructors reject broken invariants") {
  std::mt19937_64 rng(7);
  auto inst = testing::random_instance(rng, 2, 2, 2);

  SUBCASE("reward above one") {
    inst.r[0] = 1.5;
    CHECK_THROWS_AS(inst.to_environment(), ModelError);
  }
  SUBCASE("initial state out of range") {
    inst.s1 = 2;
    CHECK_THROWS_AS(inst.to_environment(), ModelError);
  }
  SUBCASE("policy row that does not sum to one") {
    inst.pi[0] += 0.1;
    CHECK_THROWS_AS(inst.to_environment(), ModelError);
  }
  SUBCASE("negative policy entry") {
    inst.pi[0] = -0.1;
    inst.pi[1] = 1.1;
    CHECK_THROWS_AS(inst.to_environment(), ModelError);
  }
  SUBCASE("adherence outside [0, 1]") {
    inst.theta[0] = 1.01;
    CHECK_THROWS_AS(inst.to_environment(), ModelError);
  }
  SUBCASE("transition row that does not sum to one") {
    TransitionKernel k(1, 2, 1);
    const Transition entries[] = {{0, 0.7}};
    k.append_row(entries);
    k.append_uniform_row();
    CHECK_THROWS_AS(TabularMDP(2, 1, 1, 0, k, {0.0, 0.0}), ModelError);
  }
}

TEST_CASE("policy entries past defer are rejected") {
  DeterministicPolicy pol(1, 1, Action{3});
  CHECK_THROWS_AS(pol.validate(2), ModelError);
  CHECK_NOTHROW(pol.validate(3));
}

TEST_CASE("human response to advice") {
  const HumanPolicy pi(1, 1, 2, {0.5, 0.5});
  const AdherenceModel theta(1, 2, {0.9, 0.6});

  SUBCASE("advising a0 at theta 0.9 over a uniform policy gives (0.9, 0.1)") {
    const auto q = human_action_distribution(0, 0, 0, pi, theta);
    CHECK(q[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(q[1] == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("deferring returns the policy row unchanged") {
    const auto q = human_action_distribution(0, 0, 2, pi, theta);
    CHECK(q == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("an action the human always takes is taken with probability one") {
    const HumanPolicy sure(1, 1, 3, {1.0, 0.0, 0.0});
    const AdherenceModel low(1, 3, {0.2, 0.2, 0.2});
    const auto q = human_action_distribution(0, 0, 0, sure, low);
    CHECK(q == std::vector<double>{1.0, 0.0, 0.0});
  }
}

TEST_CASE("human response matches the adherence law on random instances") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto inst = testing::random_instance(rng, {4, 4, 3});
    const auto env = inst.to_environment();
    for (std::size_t h = 0; h < inst.H; ++h) {
      for (State s = 0; s < inst.S; ++s) {
        for (Action am = 0; am <= inst.A; ++am) {
          const auto got = human_action_distribution(s, h, am, env.policy, env.adherence);
          const auto want = testing::response_oracle(inst, h, s, am);
          double total = 0.0;
          for (std::size_t a = 0; a < inst.A; ++a) {
            CHECK(got[a] == doctest::Approx(want[a]).epsilon(1e-14));
            CHECK(got[a] >= 0.0);
            total += got[a];
          }
          CHECK(std::abs(total - 1.0) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("adherence below the human's own probability is reported, not rejected") {
  const HumanPolicy pi(2, 1, 2, {0.8, 0.2, 0.3, 0.7});
  const AdherenceModel theta(1, 2, {0.5, 0.9});
  const auto v = adherence_below_policy(pi, theta);
  REQUIRE(v.size() == 1);
  CHECK(v[0].step == 0);
  CHECK(v[0].action == 0);
  CHECK(v[0].theta == 0.5);
  CHECK(v[0].policy_prob == 0.8);
}

TEST_CASE("full adherence reproduces the human kernel on advised actions") {
  std::mt19937_64 rng(3);
  auto inst = testing::random_instance(rng, 3, 3, 2);
  for (auto& t : inst.theta) t = 1.0;
  const auto m = machine_of(inst);
  for (std::size_t h = 0; h < inst.H; ++h) {
    for (State s = 0; s < inst.S; ++s) {
      for (Action a = 0; a < inst.A; ++a) {
        CHECK(m.reward(h, s, a) == doctest::Approx(inst.R(h, s, a)).epsilon(1e-15));
        for (State n = 0; n < inst.S; ++n) {
          CHECK(m.transitions().probability(h, s, a, n) ==
                doctest::Approx(inst.P(h, s, a, n)).epsilon(1e-15));
        }
      }
    }
  }
}

TEST_CASE("defer row marginalizes the human policy") {
  std::mt19937_64 rng(5);
  const auto inst = testing::random_instance(rng, 3, 2, 2);
  const auto m = machine_of(inst);
  for (std::size_t h = 0; h < inst.H; ++h) {
    for (State s = 0; s < inst.S; ++s) {
      double reward = 0.0;
      for (Action a = 0; a < inst.A; ++a) reward += inst.Pi(h, s, a) * inst.R(h, s, a);
      CHECK(std::abs(m.reward(h, s, m.defer()) - reward) <= 1e-12);
      for (State n = 0; n < inst.S; ++n) {
        double p = 0.0;
        for (Action a = 0; a < inst.A; ++a) p += inst.Pi(h, s, a) * inst.P(h, s, a, n);
        CHECK(m.transitions().probability(h, s, m.defer(), n) == doctest::Approx(p));
      }
    }
  }
}

TEST_CASE("half adherence over a uniform human mixes the two action kernels evenly") {
  const auto m = machine_of(two_state_instance());
  // advising either action: 0.5 on it, 0.5 on the other
  for (Action a = 0; a < 2; ++a) {
    CHECK(m.transitions().probability(0, 0, a, 0) == doctest::Approx(0.5));
    CHECK(m.transitions().probability(0, 0, a, 1) == doctest::Approx(0.5));
  }
  CHECK(m.reward(0, 0, 0) == doctest::Approx(0.5));
  CHECK(m.reward(0, 1, 1) == doctest::Approx(0.3));
}

TEST_CASE("machine rows are stochastic and match the dense construction on 1000 instances") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_instance(rng, {4, 3, 3});
    const auto m = machine_of(inst);
    const auto dense = testing::dense_machine(inst);
    CHECK_NOTHROW(m.transitions().validate(kProbabilityTolerance));
    for (std::size_t h = 0; h < inst.H; ++h) {
      for (State s = 0; s < inst.S; ++s) {
        for (Action a = 0; a <= inst.A; ++a) {
          double total = 0.0;
          for (State n = 0; n < inst.S; ++n) {
            const double p = m.transitions().probability(h, s, a, n);
            CHECK(std::abs(p - dense.P(h, s, a, n)) <= 1e-12);
            total += p;
          }
          CHECK(std::abs(total - 1.0) <= 1e-10);
          CHECK(std::abs(m.reward(h, s, a) - dense.R(h, s, a)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("argmax ties go to the lowest index") {
  CHECK(tie_broken_argmax(std::vector<double>{1.0, 2.0, 2.0}) == 1);
  CHECK(tie_broken_argmax(std::vector<double>{2.0, 2.0 + 5e-13, 1.0}) == 0);
  CHECK(tie_broken_argmax(std::vector<double>{2.0, 2.0 + 1e-9, 1.0}) == 1);
  // defer is last, so it loses exact ties with any advice
  CHECK(tie_broken_argmax(std::vector<double>{0.0, 3.0, 3.0}) == 1);
}

TEST_CASE("one-step horizon plans the best immediate reward") {
  std::mt19937_64 rng(23);
  const auto inst = testing::random_instance(rng, 3, 2, 1);
  const auto m = machine_of(inst);
  const auto plan = backward_induction(m);
  for (State s = 0; s < inst.S; ++s) {
    double best = -1.0;
    for (Action a = 0; a <= inst.A; ++a) best = std::max(best, m.reward(0, s, a));
    CHECK(plan.v(0, s) == best);
    CHECK(plan.v(1, s) == 0.0);
  }
}

TEST_CASE("zero rewards give zero values and the lowest-index policy") {
  std::mt19937_64 rng(29);
  auto inst = testing::random_instance(rng, 3, 2, 3);
  for (auto& r : inst.r) r = 0.0;
  const auto plan = backward_induction(machine_of(inst));
  for (std::size_t h = 0; h <= inst.H; ++h) {
    for (State s = 0; s < inst.S; ++s) CHECK(plan.v(h, s) == 0.0);
  }
  for (Action a : plan.policy.actions()) CHECK(a == 0);
}

TEST_CASE("backward induction agrees with enumeration of deterministic policies") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const auto inst = testing::random_instance(rng, {3, 2, 3});
    const auto m = machine_of(inst);
    const auto plan = backward_induction(m);
    const double oracle = testing::enumerated_optimum(testing::dense_machine(inst));
    CHECK(std::abs(plan.v(0, m.initial_state()) - oracle) <= 1e-9);
  }
}

TEST_CASE("optimal tables satisfy the Bellman relations") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    const auto inst = testing::random_instance(rng, {5, 3, 4});
    const auto m = machine_of(inst);
    const auto plan = backward_induction(m);
    const auto human = human_value(m);
    for (State s = 0; s < m.num_states(); ++s) CHECK(plan.v(m.horizon(), s) == 0.0);
    for (std::size_t h = 0; h < m.horizon(); ++h) {
      for (State s = 0; s < m.num_states(); ++s) {
        const auto row = plan.q.row(h, s);
        CHECK(plan.v(h, s) == *std::max_element(row.begin(), row.end()));
        CHECK(plan.policy(h, s) == tie_broken_argmax(row));
        CHECK(plan.v(h, s) >= human(h, s) - 1e-9);
      }
    }
  }
}

TEST_CASE("policy evaluation") {
  std::mt19937_64 rng(41);
  const auto inst = testing::random_instance(rng, 4, 3, 4);
  const auto m = machine_of(inst);
  const auto plan = backward_induction(m);

  SUBCASE("the greedy policy evaluates to the optimal value") {
    const auto v = policy_evaluation(m, plan.policy);
    for (std::size_t h = 0; h <= m.horizon(); ++h) {
      for (State s = 0; s < m.num_states(); ++s) {
        CHECK(std::abs(v(h, s) - plan.v(h, s)) <= 1e-10);
      }
    }
  }
  SUBCASE("always deferring is the human's own value") {
    const auto v = policy_evaluation(m, always_defer(m));
    const auto human = human_value(m);
    const auto dense = testing::dense_machine(inst);
    std::vector<std::size_t> act(inst.H * inst.S, inst.A);
    CHECK(v(0, m.initial_state()) == human(0, m.initial_state()));
    CHECK(std::abs(v(0, m.initial_state()) - testing::evaluate_dense(dense, act).value) <= 1e-12);
  }
  SUBCASE("a pure mixture evaluates its first component") {
    MixturePolicy mix{plan.policy, always_defer(m), 1.0};
    CHECK(initial_value(m, mix) == initial_value(m, plan.policy));
  }
  SUBCASE("a mixture combines the components linearly in q") {
    MixturePolicy mix{plan.policy, always_defer(m), 0.3};
    const double want =
        0.3 * initial_value(m, plan.policy) + 0.7 * initial_value(m, always_defer(m));
    CHECK(initial_value(m, mix) == doctest::Approx(want).epsilon(1e-14));
    const double count = 0.3 * expected_advice_count(m, plan.policy);
    CHECK(expected_advice_count(m, mix) == doctest::Approx(count).epsilon(1e-14));
  }
  SUBCASE("mixture weights outside [0, 1] are rejected") {
    MixturePolicy mix{plan.policy, plan.policy, 1.5};
    CHECK_THROWS(mix.validate(m.defer()));
  }
}

TEST_CASE("occupancy of a one-step horizon is a point mass") {
  std::mt19937_64 rng(43);
  const auto inst = testing::random_instance(rng, 3, 2, 1);
  const auto m = machine_of(inst);
  DeterministicPolicy pol(1, 3, Action{1});
  const auto mu = occupancy_measures(m, pol);
  for (State s = 0; s < 3; ++s) {
    for (Action a = 0; a < 3; ++a) {
      CHECK(mu(0, s, a) == (s == m.initial_state() && a == 1 ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("occupancy follows a deterministic chain with unit mass") {
  DenseInstance inst;
  inst.S = 3;
  inst.A = 1;
  inst.H = 3;
  inst.s1 = 0;
  for (std::size_t h = 0; h < 3; ++h) {
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t n = 0; n < 3; ++n) inst.p.push_back(n == (s + 1) % 3 ? 1.0 : 0.0);
      inst.r.push_back(0.0);
      inst.pi.push_back(1.0);
    }
  }
  inst.theta = {1.0, 1.0, 1.0};
  const auto m = machine_of(inst);
  const auto mu = occupancy_measures(m, always_defer(m));
  for (std::size_t h = 0; h < 3; ++h) CHECK(mu(h, static_cast<State>(h % 3), 1) == 1.0);
}

TEST_CASE("occupancy and advice count match Monte-Carlo frequencies") {
  std::mt19937_64 rng(47);
  const auto inst = testing::random_instance(rng, 3, 2, 3);
  const auto m = machine_of(inst);
  DeterministicPolicy pol(3, 3, Action{0});
  for (std::size_t h = 0; h < 3; ++h) {
    for (State s = 0; s < 3; ++s) pol(h, s) = static_cast<Action>((h + s) % 3);
  }
  const auto mu = occupancy_measures(m, pol);
  const std::size_t n = 1'000'000;
  const auto mc = testing::monte_carlo(inst, pol, n, 99);
  for (std::size_t h = 0; h < 3; ++h) {
    double mass = 0.0;
    for (State s = 0; s < 3; ++s) {
      for (Action a = 0; a < 3; ++a) {
        const double p = mu(h, s, a);
        mass += p;
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(n));
        CHECK(std::abs(mc.occupancy[(h * 3 + s) * 3 + a] - p) <= 3 * se + 1e-12);
      }
    }
    CHECK(std::abs(mass - 1.0) <= 1e-10);
  }
  const double count = expected_advice_count(m, pol);
  const double se = std::sqrt(mc.advice_variance / static_cast<double>(n));
  CHECK(std::abs(mc.advice_mean - count) <= 3 * se);
}

TEST_CASE("advice count is zero for always-defer and H for never-defer") {
  std::mt19937_64 rng(53);
  const auto inst = testing::random_instance(rng, 4, 2, 5);
  const auto m = machine_of(inst);
  CHECK(expected_advice_count(m, always_defer(m)) == 0.0);
  CHECK(expected_advice_count(m, DeterministicPolicy(5, 4, Action{1})) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("optimal value is monotone in adherence that never undercuts the human") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    auto inst = testing::random_instance(rng, {5, 3, 4});
    auto high = inst;
    for (std::size_t s = 0; s < inst.S; ++s) {
      for (std::size_t a = 0; a < inst.A; ++a) {
        double floor = 0.0;
        for (std::size_t h = 0; h < inst.H; ++h) floor = std::max(floor, inst.Pi(h, s, a));
        const double low = floor + (1.0 - floor) * u(rng);
        inst.theta[s * inst.A + a] = low;
        high.theta[s * inst.A + a] = low + (1.0 - low) * u(rng);
      }
    }
    const auto env_low = inst.to_environment();
    REQUIRE(adherence_below_policy(env_low.policy, env_low.adherence).empty());
    const auto m_low = machine_of(inst);
    const auto m_high = machine_of(high);
    CHECK(backward_induction(m_high).v(0, m_high.initial_state()) >=
          backward_induction(m_low).v(0, m_low.initial_state()) - 1e-9);
  }
}
