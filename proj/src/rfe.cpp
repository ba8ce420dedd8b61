#include "advice/rfe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "advice/planning.hpp"

namespace advice {

EmpiricalModel::EmpiricalModel(std::size_t num_states, std::size_t num_human_actions,
                               std::size_t horizon, State initial_state)
    : num_states_(num_states),
      num_human_actions_(num_human_actions),
      horizon_(horizon),
      initial_state_(initial_state),
      cells_(horizon * num_states * (num_human_actions + 1)) {
  if (num_states == 0 || num_human_actions == 0 || horizon == 0) {
    throw ModelError("empirical model needs S, A, H >= 1");
  }
  if (initial_state >= num_states) throw ModelError("initial state out of range");
}

void EmpiricalModel::record(std::size_t h, State s, Action a, State next, double reward,
                            std::uint64_t n) {
  if (h >= horizon_ || s >= num_states_ || a >= num_actions() || next >= num_states_) {
    throw std::out_of_range("empirical model: transition index out of range");
  }
  if (n == 0) return;
  Cell& c = cell(h, s, a);
  c.visits += n;
  c.reward_sum += reward * static_cast<double>(n);
  auto it = std::lower_bound(c.successors.begin(), c.successors.end(), next,
                             [](const auto& entry, State v) { return entry.first < v; });
  if (it != c.successors.end() && it->first == next) {
    it->second += n;
  } else {
    c.successors.insert(it, {next, n});
  }
}

void EmpiricalModel::update(const sim::Trajectory& traj) {
  for (std::size_t h = 0; h < traj.steps.size(); ++h) {
    const sim::Step& step = traj.steps[h];
    record(h, step.state, step.machine_action, step.next_state, step.reward);
  }
}

double EmpiricalModel::p_hat(std::size_t h, State s, Action a, State next) const {
  const Cell& c = cell(h, s, a);
  if (c.visits == 0) return 1.0 / static_cast<double>(num_states_);
  auto it = std::lower_bound(c.successors.begin(), c.successors.end(), next,
                             [](const auto& entry, State v) { return entry.first < v; });
  if (it == c.successors.end() || it->first != next) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(c.visits);
}

double EmpiricalModel::r_hat(std::size_t h, State s, Action a) const {
  const Cell& c = cell(h, s, a);
  return c.visits == 0 ? 0.0 : c.reward_sum / static_cast<double>(c.visits);
}

MachineMDP EmpiricalModel::to_machine_mdp() const {
  std::vector<double> rewards(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    rewards[i] = c.visits == 0 ? 0.0 : c.reward_sum / static_cast<double>(c.visits);
  }
  return to_machine_mdp(std::move(rewards));
}

MachineMDP EmpiricalModel::to_machine_mdp(std::vector<double> rewards) const {
  if (rewards.size() != cells_.size()) {
    throw ModelError("reward table size does not match the empirical model");
  }
  auto kernel = std::make_shared<TransitionKernel>(horizon_, num_states_, num_actions());
  std::vector<Transition> row;
  for (const Cell& c : cells_) {
    if (c.visits == 0) {
      kernel->append_uniform_row();
      continue;
    }
    row.clear();
    const double n = static_cast<double>(c.visits);
    for (const auto& [next, count] : c.successors) {
      row.push_back({next, static_cast<double>(count) / n});
    }
    kernel->append_row(row);
  }
  return MachineMDP(num_states_, num_human_actions_, horizon_, initial_state_,
                    std::move(kernel), std::move(rewards));
}

WTable::WTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions, double fill)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      values_((horizon + 1) * num_states * num_actions, fill) {
  std::fill(values_.end() - static_cast<std::ptrdiff_t>(num_states * num_actions),
            values_.end(), 0.0);
}

void RfeConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(bonus_scale > 0.0)) throw std::invalid_argument("bonus scale must be positive");
  if (max_episodes < 1) throw std::invalid_argument("episode cap must be at least 1");
  if (replan_every < 1) throw std::invalid_argument("replan_every must be at least 1");
  if (!(phi_log_constant > 0.0)) throw std::invalid_argument("phi log constant must be positive");
}

double RfeConfig::threshold(std::size_t horizon) const {
  return threshold_mode == ThresholdMode::beta ? epsilon / static_cast<double>(horizon)
                                               : epsilon / 2.0;
}

double phi(std::uint64_t n, std::size_t num_states, std::size_t num_actions,
           std::size_t horizon, double epsilon, double delta, double log_constant) {
  const double S = static_cast<double>(num_states);
  const double hsa = static_cast<double>(horizon) * S * static_cast<double>(num_actions);
  return 6.0 * std::log(log_constant * hsa / (epsilon * delta)) +
         S * std::log(8.0 * std::numbers::e * (static_cast<double>(n) + 1.0));
}

WTable compute_w(const EmpiricalModel& emp, const RfeConfig& cfg) {
  const std::size_t H = emp.horizon();
  const std::size_t S = emp.num_states();
  const std::size_t AM = emp.num_actions();
  const double Hd = static_cast<double>(H);
  WTable w(H, S, AM, Hd);

  std::vector<double> next_max(S, 0.0);
  for (std::size_t h = H; h-- > 0;) {
    for (State s = 0; s < S; ++s) {
      const std::span<const double> r = w.row(h + 1, s);
      next_max[s] = *std::max_element(r.begin(), r.end());
    }

    for (State s = 0; s < S; ++s) {
      for (Action a = 0; a < AM; ++a) {
        const std::uint64_t n = emp.visits(h, s, a);
        if (n == 0) {
          w(h, s, a) = Hd;
          continue;
        }
        const double nd = static_cast<double>(n);
        const double bonus = cfg.bonus_scale * 16.0 * Hd * Hd *
                             phi(n, S, emp.num_human_actions(), H, cfg.epsilon, cfg.delta,
                                 cfg.phi_log_constant) /
                             nd;
        double propagated = 0.0;
        for (const auto& [next, count] : emp.successors(h, s, a)) {
          propagated += static_cast<double>(count) / nd * next_max[next];
        }
        w(h, s, a) = std::min(Hd, bonus + (1.0 + 1.0 / Hd) * propagated);
      }
    }
  }
  return w;
}

DeterministicPolicy w_greedy_policy(const WTable& w) {
  DeterministicPolicy policy(w.horizon(), w.num_states(), Action{0});
  for (std::size_t h = 0; h < w.horizon(); ++h) {
    for (State s = 0; s < w.num_states(); ++s) policy(h, s) = tie_broken_argmax(w.row(h, s));
  }
  return policy;
}

bool stopping_check(double w_root, double threshold) {
  return w_root + 4.0 * std::numbers::e * std::sqrt(w_root) <= threshold;
}

bool stopping_check(const WTable& w, const DeterministicPolicy& policy, State initial_state,
                    const RfeConfig& cfg) {
  return stopping_check(w(0, initial_state, policy(0, initial_state)),
                        cfg.threshold(w.horizon()));
}

RfeExplorer::RfeExplorer(const TabularMDP& mdp, const HumanPolicy& pi,
                         const AdherenceModel& theta, RfeConfig cfg, std::uint64_t seed)
    : mdp_(mdp),
      pi_(pi),
      theta_(theta),
      cfg_(cfg),
      seed_(seed),
      model_(mdp.num_states(), mdp.num_actions(), mdp.horizon(), mdp.initial_state()),
      w_(mdp.horizon(), mdp.num_states(), mdp.num_actions() + 1,
         static_cast<double>(mdp.horizon())),
      policy_(w_greedy_policy(w_)) {
  cfg_.validate();
  check_compatible(mdp, pi, theta);
  w_root_ = w_(0, mdp.initial_state(), policy_(0, mdp.initial_state()));
  stopped_ = stopping_check(w_root_, cfg_.threshold(mdp.horizon()));
}

void RfeExplorer::refresh() {
  w_ = compute_w(model_, cfg_);
  policy_ = w_greedy_policy(w_);
  const State s1 = mdp_.initial_state();
  w_root_ = w_(0, s1, policy_(0, s1));
  stopped_ = stopping_check(w_root_, cfg_.threshold(mdp_.horizon()));
}

bool RfeExplorer::step() {
  if (stopped_ || at_cap()) return false;
  sim::CounterRng rng(seed_, episodes_);
  model_.update(sim::rollout_episode(mdp_, pi_, theta_, policy_, rng));
  ++episodes_;
  if (episodes_ % cfg_.replan_every == 0) refresh();
  return true;
}

ExploreResult explore(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta,
                      const RfeConfig& cfg, std::uint64_t seed) {
  RfeExplorer explorer(mdp, pi, theta, cfg, seed);
  while (explorer.step()) {
  }
  return {explorer.model(), explorer.episodes(), explorer.stopped(), explorer.w_root()};
}

namespace {

MachineMDP empirical_machine(const EmpiricalModel& emp,
                             std::optional<std::span<const double>> known_rewards) {
  if (!known_rewards) return emp.to_machine_mdp();
  return emp.to_machine_mdp(std::vector<double>(known_rewards->begin(), known_rewards->end()));
}

}  // namespace

std::vector<DeterministicPolicy> plan_stage2_beta(
    const EmpiricalModel& emp, std::span<const double> betas,
    std::optional<std::span<const double>> known_rewards) {
  const MachineMDP m = empirical_machine(emp, known_rewards);
  std::vector<DeterministicPolicy> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    out.push_back(backward_induction(penalized_machine_mdp(m, {beta})).policy);
  }
  return out;
}

CmdpSolution plan_stage2_cmdp(const EmpiricalModel& emp, const BudgetConfig& cfg,
                              std::optional<std::span<const double>> known_rewards) {
  const MachineMDP m = empirical_machine(emp, known_rewards);
  if (cfg.budget >= static_cast<double>(emp.horizon())) {
    // no policy advises more than H times, so the budget cannot bind
    PlanningResult plan = backward_induction(m);
    CmdpSolution out;
    out.value = plan.v(0, m.initial_state());
    out.advice_count = expected_advice_count(m, plan.policy);
    out.policy = MixturePolicy::pure(std::move(plan.policy));
    return out;
  }
  return solve_cmdp_dual(m, cfg);
}

RfeRunResult rfe_run(const TabularMDP& mdp, const HumanPolicy& pi, const AdherenceModel& theta,
                     const RfeConfig& cfg, std::uint64_t seed, const sim::RowCallback& on_row) {
  const MachineMDP truth = build_machine_mdp(mdp, pi, theta);
  const double optimal = backward_induction(truth).v(0, truth.initial_state());
  std::optional<std::span<const double>> known;
  if (cfg.known_reward) known = truth.rewards();

  RfeExplorer explorer(mdp, pi, theta, cfg, seed);
  sim::MetricsLog log;
  sim::RegretTracker regret;
  std::size_t updates = 0;

  auto evaluate = [&]() {
    const MachineMDP model = empirical_machine(explorer.model(), known);
    const DeterministicPolicy policy = backward_induction(model).policy;
    ++updates;
    return std::max(0.0, optimal - initial_value(truth, policy));
  };

  double gap = evaluate();
  while (explorer.step()) {
    const std::size_t done = explorer.episodes();
    const bool last = explorer.stopped() || explorer.at_cap();
    if (done % cfg.replan_every != 0 && !last) continue;
    sim::MetricsRow& row = regret.record(log, done, gap);
    row.num_updates = updates;
    row.w_root = explorer.w_root();
    row.stopped = explorer.stopped();
    if (on_row) on_row(row);
    gap = evaluate();
  }
  return {std::move(log), explorer.model(), explorer.episodes(), explorer.stopped()};
}

sim::MetricsLog rfe_advice_run(const TabularMDP& mdp, const HumanPolicy& pi,
                               const AdherenceModel& theta, const RfeConfig& cfg,
                               std::uint64_t seed, const sim::RowCallback& on_row) {
  RfeConfig advice_cfg = cfg;
  advice_cfg.threshold_mode = ThresholdMode::advice;
  return rfe_run(mdp, pi, theta, advice_cfg, seed, on_row).log;
}

}  // namespace advice
