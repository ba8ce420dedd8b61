#include "advice/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace advice {

AdherenceEstimator::AdherenceEstimator(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      advised_(num_states * num_actions, 0),
      adhered_(num_states * num_actions, 0) {}

void AdherenceEstimator::update(const sim::Trajectory& traj) {
  for (const sim::Step& step : traj.steps) {
    if (step.machine_action >= num_actions_) continue;
    const std::size_t i = step.state * num_actions_ + step.machine_action;
    ++advised_[i];
    if (step.human_action == step.machine_action) ++adhered_[i];
  }
}

double AdherenceEstimator::theta_hat(State s, Action a) const {
  const std::uint64_t n = advised(s, a);
  return n == 0 ? 0.0 : static_cast<double>(adhered(s, a)) / static_cast<double>(n);
}

void UcbConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (episodes < 1) throw std::invalid_argument("episode budget T must be at least 1");
  if (!(width_scale > 0.0)) throw std::invalid_argument("width scale must be positive");
  if (replan_every < 1) throw std::invalid_argument("replan_every must be at least 1");
}

double confidence_width(double theta_hat, std::uint64_t n, std::size_t num_states,
                        std::size_t num_actions, const UcbConfig& cfg) {
  if (!(theta_hat >= 0.0 && theta_hat <= 1.0)) {
    throw std::invalid_argument("confidence_width: theta_hat must lie in [0, 1]");
  }
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);

  if (cfg.width_mode == WidthMode::practical) {
    return cfg.width_scale * std::sqrt(2.0 * std::log(nd) / nd);
  }

  const double sat = static_cast<double>(num_states) * static_cast<double>(num_actions) *
                     static_cast<double>(cfg.episodes);
  const double log12 = std::log(12.0 * sat / cfg.delta);
  const double variance = theta_hat * (1.0 - theta_hat);

  const double hoeffding = 2.0 * std::sqrt(log12);
  const double bernstein =
      std::sqrt(2.0 * variance * log12) + 7.0 * std::sqrt(nd) / (3.0 * nd - 1.0) * log12;
  double width = std::min(hoeffding, bernstein);
  if (n > 1) {
    // The third term uses log(SAT / delta), without the factor 12.
    const double log1 = std::log(sat / cfg.delta);
    const double shrunk =
        std::max(0.0, std::sqrt(variance) - std::sqrt(2.0 * log1 / (nd - 1.0)));
    const double upper = (1.0 + std::sqrt(1.0 + 4.0 * shrunk * shrunk)) / 2.0;
    width = std::min(width, (upper - theta_hat) * std::sqrt(nd));
  }
  return width;
}

AdherenceModel optimistic_theta(const AdherenceEstimator& est, const UcbConfig& cfg) {
  const std::size_t S = est.num_states();
  const std::size_t A = est.num_actions();
  std::vector<double> theta(S * A, 1.0);
  for (State s = 0; s < S; ++s) {
    for (Action a = 0; a < A; ++a) {
      const std::uint64_t n = est.advised(s, a);
      if (n == 0) continue;
      const double hat = est.theta_hat(s, a);
      const double width = confidence_width(hat, n, S, A, cfg);
      theta[s * A + a] = std::min(1.0, hat + width / std::sqrt(static_cast<double>(n)));
    }
  }
  return AdherenceModel(S, A, std::move(theta));
}

UcbLearner::UcbLearner(const TabularMDP& mdp, const HumanPolicy& pi, UcbConfig cfg)
    : mdp_(mdp),
      pi_(pi),
      cfg_(cfg),
      estimator_(mdp.num_states(), mdp.num_actions()),
      optimistic_(AdherenceModel::constant(mdp.num_states(), mdp.num_actions(), 1.0)) {
  cfg_.validate();
}

void UcbLearner::replan() {
  optimistic_ = optimistic_theta(estimator_, cfg_);
  PlanningResult plan = backward_induction(build_machine_mdp(mdp_, pi_, optimistic_));
  optimistic_value_ = plan.v(0, mdp_.initial_state());
  policy_ = std::move(plan.policy);
}

sim::MetricsLog ucb_ad_run(const TabularMDP& mdp, const HumanPolicy& pi,
                           const AdherenceModel& true_theta, const UcbConfig& cfg,
                           std::uint64_t seed, const sim::RowCallback& on_row) {
  const MachineMDP truth = build_machine_mdp(mdp, pi, true_theta);
  const double optimal = backward_induction(truth).v(0, truth.initial_state());

  UcbLearner learner(mdp, pi, cfg);
  sim::MetricsLog log;
  sim::RegretTracker regret;
  std::size_t updates = 0;
  double gap = 0.0;
  double advice = 0.0;
  for (std::size_t t = 0; t < cfg.episodes; ++t) {
    if (t % cfg.replan_every == 0) {
      learner.replan();
      ++updates;
      gap = std::max(0.0, optimal - initial_value(truth, learner.policy()));
      advice = expected_advice_count(truth, learner.policy());
    }
    sim::CounterRng rng(seed, t);
    learner.observe(sim::rollout_episode(mdp, pi, true_theta, learner.policy(), rng));

    const std::size_t done = t + 1;
    if (done % cfg.replan_every == 0 || done == cfg.episodes) {
      sim::MetricsRow& row = regret.record(log, done, gap);
      row.advice_count = advice;
      row.num_updates = updates;
      if (on_row) on_row(row);
    }
  }
  return log;
}

}  // namespace advice
