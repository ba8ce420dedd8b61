#include "advice/sim/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advice/machine.hpp"
#include "advice/sim/rollout.hpp"

namespace advice::sim {

void BaselineConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (episodes < 1) throw std::invalid_argument("episode budget T must be at least 1");
  if (!(bonus_scale > 0.0)) throw std::invalid_argument("bonus scale must be positive");
  if (replan_every < 1) throw std::invalid_argument("replan_every must be at least 1");
}

PlanningResult optimistic_plan(const EmpiricalModel& emp, const BaselineConfig& cfg) {
  const std::size_t S = emp.num_states();
  const std::size_t H = emp.horizon();
  const std::size_t AM = emp.num_actions();
  const double Hd = static_cast<double>(H);
  const double log_term =
      std::log(static_cast<double>(S) * static_cast<double>(AM) * Hd *
               static_cast<double>(cfg.episodes) / cfg.delta);

  PlanningResult out{QTable(H, S, AM), ValueTable(H, S),
                     DeterministicPolicy(H, S, static_cast<Action>(AM - 1))};
  for (std::size_t h = H; h-- > 0;) {
    for (State s = 0; s < S; ++s) {
      for (Action a = 0; a < AM; ++a) {
        const std::uint64_t n = emp.visits(h, s, a);
        if (n == 0) {
          out.q(h, s, a) = Hd;
          continue;
        }
        const double nd = static_cast<double>(n);
        double next = 0.0;
        for (const auto& [succ, count] : emp.successors(h, s, a)) {
          next += static_cast<double>(count) / nd * out.v(h + 1, succ);
        }
        const double bonus = cfg.bonus_scale * Hd * std::sqrt(log_term / nd);
        out.q(h, s, a) = std::min(Hd, emp.r_hat(h, s, a) + bonus + next);
      }
      const auto row = out.q.row(h, s);
      out.policy(h, s) = tie_broken_argmax(row);
      out.v(h, s) = *std::max_element(row.begin(), row.end());
    }
  }
  return out;
}

MetricsLog baseline_optimistic(const TabularMDP& mdp, const HumanPolicy& pi,
                               const AdherenceModel& theta, const BaselineConfig& cfg,
                               std::uint64_t seed, const RowCallback& on_row) {
  cfg.validate();
  const MachineMDP truth = build_machine_mdp(mdp, pi, theta);
  const double optimal = backward_induction(truth).v(0, truth.initial_state());

  EmpiricalModel model(mdp.num_states(), mdp.num_actions(), mdp.horizon(),
                       mdp.initial_state());
  DeterministicPolicy policy;
  MetricsLog log;
  RegretTracker regret;
  std::size_t updates = 0;
  double gap = 0.0;
  double advice = 0.0;
  for (std::size_t t = 0; t < cfg.episodes; ++t) {
    if (t % cfg.replan_every == 0) {
      policy = optimistic_plan(model, cfg).policy;
      ++updates;
      gap = std::max(0.0, optimal - initial_value(truth, policy));
      advice = expected_advice_count(truth, policy);
    }
    CounterRng rng(seed, t);
    model.update(rollout_episode(mdp, pi, theta, policy, rng));

    const std::size_t done = t + 1;
    if (done % cfg.replan_every == 0 || done == cfg.episodes) {
      MetricsRow& row = regret.record(log, done, gap);
      row.advice_count = advice;
      row.num_updates = updates;
      if (on_row) on_row(row);
    }
  }
  return log;
}

}  // namespace advice::sim
