#include "advice/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "advice/envs/car.hpp"
#include "advice/envs/env_spec.hpp"
#include "advice/envs/flappy.hpp"
#include "advice/machine.hpp"
#include "advice/pertinence.hpp"
#include "advice/planning.hpp"
#include "advice/rfe.hpp"
#include "advice/sim/experiment.hpp"
#include "advice/sim/metrics.hpp"

#ifndef ADVICE_GIT_REVISION
#define ADVICE_GIT_REVISION "unknown"
#endif

namespace advice::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Bad flags or configuration values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { text, count, seed, real, reals, boolean };

struct Flag {
  const char* name;
  Kind kind;
  const char* help;
  json fallback;  // null: unset unless given
};

const std::vector<Flag>& flag_table() {
  static const std::vector<Flag> table = {
      {"env", Kind::text, "Environment: flappy, car or file:<path> to an env-spec JSON",
       "flappy"},
      {"map", Kind::text, "Flappy map file ('.' empty, '*' star, '#' wall); built-in map if unset",
       nullptr},
      {"human-policy", Kind::text, "Flappy human policy: greedy or safe", "greedy"},
      {"theta", Kind::real, "Replace the adherence model by a constant level in [0, 1]", nullptr},
      {"algo", Kind::text,
       "Learner: ucb-ad or baseline for learn-ucb, rfe-advice or rfe-beta for learn-rfe",
       nullptr},
      {"episodes", Kind::count, "Episode budget T (exploration cap for learn-rfe)", 10000},
      {"delta", Kind::real, "Confidence parameter in (0, 1)", 0.1},
      {"epsilon", Kind::real, "RFE accuracy target in (0, 1]", 0.1},
      {"betas", Kind::reals, "Comma-separated ascending advice penalties in [0, H)",
       json::array({0.0, 0.2, 0.4})},
      {"budget", Kind::real, "Expected advice budget D in (0, H)", 1.0},
      {"width-mode", Kind::text, "UCB confidence width: practical or theory", "practical"},
      {"width-scale", Kind::real, "Practical width constant c", 0.4},
      {"bonus-scale", Kind::real, "Exploration bonus multiplier for learn-rfe and baseline", 1.0},
      {"replan-every", Kind::count, "Episodes between policy updates and log rows", 1},
      {"known-reward", Kind::boolean,
       "learn-rfe plans with the true reward instead of its estimate", false},
      {"seed", Kind::seed, "Base random seed; required by learn-ucb and learn-rfe", nullptr},
      {"parallel-seeds", Kind::count, "Number of seeds (seed, seed+1, ...) run in parallel", 1},
      {"policy", Kind::text, "Policy JSON evaluated by eval", nullptr},
  };
  return table;
}

std::string describe(const Flag& f) {
  std::string help = f.help;
  if (!f.fallback.is_null()) {
    std::string shown;
    if (f.fallback.is_array()) {
      for (const json& v : f.fallback) {
        if (!shown.empty()) shown += ',';
        shown += sim::format_double(v.get<double>());
      }
    } else if (f.fallback.is_string()) {
      shown = f.fallback.get<std::string>();
    } else if (f.fallback.is_number_float()) {
      shown = sim::format_double(f.fallback.get<double>());
    } else {
      shown = f.fallback.dump();
    }
    help += " (default: " + shown + ")";
  }
  return help;
}

double parse_real(const std::string& flag_name, std::string_view text) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw UsageError("--" + flag_name + ": '" + std::string(text) + "' is not a number");
  }
  return x;
}

std::uint64_t parse_unsigned(const std::string& flag_name, std::string_view text) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--" + flag_name + ": '" + std::string(text) +
                     "' is not a non-negative integer");
  }
  return x;
}

json parse_flag_value(const Flag& f, const std::string& text) {
  switch (f.kind) {
    case Kind::text: return text;
    case Kind::count:
    case Kind::seed: return parse_unsigned(f.name, text);
    case Kind::real: return parse_real(f.name, text);
    case Kind::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw UsageError(std::string("--") + f.name + ": expected true or false");
    case Kind::reals: {
      json out = json::array();
      std::size_t pos = 0;
      while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        out.push_back(parse_real(f.name, std::string_view(text).substr(pos, end - pos)));
        pos = end + 1;
      }
      return out;
    }
  }
  return nullptr;
}

const char* type_name(Kind kind) {
  switch (kind) {
    case Kind::count:
    case Kind::seed: return "INT";
    case Kind::real: return "FLOAT";
    case Kind::reals: return "LIST";
    default: return "TEXT";
  }
}

/// Checks a value read from a config file against the flag's kind.
void check_config_value(const Flag& f, const json& v) {
  const std::string where = std::string("config key '") + f.name + "'";
  bool ok = false;
  switch (f.kind) {
    case Kind::text: ok = v.is_string(); break;
    case Kind::count:
    case Kind::seed: ok = v.is_number_unsigned(); break;
    case Kind::real: ok = v.is_number(); break;
    case Kind::boolean: ok = v.is_boolean(); break;
    case Kind::reals:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) {
             return x.is_number();
           });
      break;
  }
  if (!ok && !v.is_null()) throw UsageError(where + " has the wrong type");
}

/// Effective settings after defaults, config file and flags.
class Settings {
 public:
  explicit Settings(json values) : values_(std::move(values)) {}

  bool has(const char* key) const { return !values_.at(key).is_null(); }
  const json& values() const { return values_; }
  void set(const char* key, json v) { values_[key] = std::move(v); }

  std::string text(const char* key) const {
    require(key);
    return values_.at(key).get<std::string>();
  }
  double real(const char* key) const {
    require(key);
    return values_.at(key).get<double>();
  }
  std::uint64_t count(const char* key) const {
    require(key);
    return values_.at(key).get<std::uint64_t>();
  }
  bool boolean(const char* key) const { return has(key) && values_.at(key).get<bool>(); }
  std::vector<double> reals(const char* key) const {
    require(key);
    return values_.at(key).get<std::vector<double>>();
  }

  void require(const char* key) const {
    if (!has(key)) throw UsageError(std::string("--") + key + " is required for this command");
  }

 private:
  json values_;
};

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json policy_json(const DeterministicPolicy& policy, Action defer) {
  json act = json::array();
  for (std::size_t h = 0; h < policy.horizon(); ++h) {
    json row = json::array();
    for (State s = 0; s < policy.num_states(); ++s) row.push_back(policy(h, s));
    act.push_back(std::move(row));
  }
  return {{"H", policy.horizon()}, {"S", policy.num_states()}, {"defer", defer},
          {"act", std::move(act)}};
}

json mixture_json(const MixturePolicy& policy, Action defer) {
  return {{"q", policy.q},
          {"first", policy_json(policy.first, defer)},
          {"second", policy_json(policy.second, defer)}};
}

DeterministicPolicy policy_from_json(const json& doc, const MachineMDP& m) {
  if (!doc.contains("act") || !doc["act"].is_array()) {
    throw UsageError("--policy: missing 'act' array");
  }
  const json& act = doc["act"];
  if (act.size() != m.horizon()) throw UsageError("--policy: act has the wrong horizon");
  std::vector<Action> actions;
  actions.reserve(m.horizon() * m.num_states());
  for (std::size_t h = 0; h < m.horizon(); ++h) {
    if (!act[h].is_array() || act[h].size() != m.num_states()) {
      throw UsageError("--policy: act[" + std::to_string(h) + "] has the wrong state count");
    }
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      const json& a = act[h][s];
      if (!a.is_number_unsigned() || a.get<std::uint64_t>() > m.defer()) {
        throw UsageError("--policy: act[" + std::to_string(h) + "][" + std::to_string(s) +
                         "] is not a machine action");
      }
      actions.push_back(a.get<Action>());
    }
  }
  return DeterministicPolicy(m.horizon(), m.num_states(), std::move(actions));
}

MixturePolicy load_policy(const fs::path& path, const MachineMDP& m) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw UsageError("--policy: " + path.string() + ": " + e.what());
  }
  if (doc.contains("q")) {
    if (!doc["q"].is_number()) throw UsageError("--policy: 'q' must be a number");
    MixturePolicy mix{policy_from_json(doc.at("first"), m), policy_from_json(doc.at("second"), m),
                      doc["q"].get<double>()};
    mix.validate(m.defer());
    return mix;
  }
  return MixturePolicy::pure(policy_from_json(doc, m));
}

envs::Environment make_environment(const Settings& s) {
  const std::string env = s.text("env");
  envs::Environment out = [&]() -> envs::Environment {
    if (env == "flappy") {
      envs::FlappyConfig cfg;
      if (s.has("map")) cfg.map = envs::GridMap::load(s.text("map"));
      const std::string kind = s.text("human-policy");
      if (kind == "greedy") {
        cfg.human_policy = envs::HumanPolicyKind::greedy;
      } else if (kind == "safe") {
        cfg.human_policy = envs::HumanPolicyKind::safe;
      } else {
        throw UsageError("--human-policy: expected greedy or safe, got '" + kind + "'");
      }
      return envs::build_flappy(cfg);
    }
    if (env == "car") return envs::build_car({});
    if (env.rfind("file:", 0) == 0) return envs::load_env_spec(env.substr(5));
    throw UsageError("--env: expected flappy, car or file:<path>, got '" + env + "'");
  }();
  if (s.has("theta")) {
    const double theta = s.real("theta");
    if (!(theta >= 0.0 && theta <= 1.0)) throw UsageError("--theta must lie in [0, 1]");
    out.adherence = AdherenceModel::constant(out.mdp.num_states(), out.mdp.num_actions(), theta);
  }
  return out;
}

void check_range(const Settings& s, const char* key, double lo, double hi, bool lo_open,
                 bool hi_open) {
  const double x = s.real(key);
  const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  if (!ok) {
    std::ostringstream msg;
    msg << "--" << key << " must lie in " << (lo_open ? '(' : '[') << sim::format_double(lo)
        << ", " << sim::format_double(hi) << (hi_open ? ')' : ']');
    throw UsageError(msg.str());
  }
}

void check_positive_count(const Settings& s, const char* key) {
  if (s.count(key) < 1) throw UsageError(std::string("--") + key + " must be at least 1");
}

void check_betas(const std::vector<double>& betas, std::size_t horizon) {
  if (betas.empty()) throw UsageError("--betas must list at least one value");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0 && betas[i] < static_cast<double>(horizon))) {
      throw UsageError("--betas: " + sim::format_double(betas[i]) + " is outside [0, " +
                       std::to_string(horizon) + ")");
    }
    if (i > 0 && betas[i] < betas[i - 1]) throw UsageError("--betas must be ascending");
  }
}

struct Context {
  Settings settings;
  std::string command;
  fs::path out_dir;
  std::ostream& out;
  json outputs = json::array();

  void emit(const std::string& name, const std::string& content) {
    write_text(out_dir / name, content);
    outputs.push_back(name);
    out << "wrote " << (out_dir / name).string() << '\n';
  }
};

std::string csv_sweep_header() { return "beta_or_D,value,advice_count,num_advised_state_steps\n"; }

std::string csv_sweep_row(double x, double value, double count, std::size_t steps) {
  return sim::format_double(x) + ',' + sim::format_double(value) + ',' +
         sim::format_double(count) + ',' + std::to_string(steps) + '\n';
}

void cmd_plan(Context& ctx) {
  const envs::Environment env = make_environment(ctx.settings);
  const MachineMDP m = build_machine_mdp(env.mdp, env.policy, env.adherence);
  const PlanningResult plan = backward_induction(m);
  const State s1 = m.initial_state();
  const json summary = {{"optimal_value", plan.v(0, s1)},
                        {"human_value", human_value(m)(0, s1)},
                        {"advice_count", expected_advice_count(m, plan.policy)},
                        {"num_advised_state_steps", advised_state_steps(m, plan.policy)}};
  ctx.emit("policy.json", policy_json(plan.policy, m.defer()).dump() + "\n");
  ctx.emit("summary.json", summary.dump(2) + "\n");
}

void cmd_sweep_beta(Context& ctx) {
  const envs::Environment env = make_environment(ctx.settings);
  const MachineMDP m = build_machine_mdp(env.mdp, env.policy, env.adherence);
  const std::vector<double> betas = ctx.settings.reals("betas");
  check_betas(betas, m.horizon());
  std::string csv = csv_sweep_header();
  for (const BetaSweepEntry& e : beta_sweep(m, betas)) {
    csv += csv_sweep_row(e.beta, e.unpenalized_value, e.advice_count,
                         advised_state_steps(m, e.policy));
  }
  ctx.emit("sweep.csv", csv);
}

void cmd_cmdp(Context& ctx) {
  const envs::Environment env = make_environment(ctx.settings);
  const MachineMDP m = build_machine_mdp(env.mdp, env.policy, env.adherence);
  check_range(ctx.settings, "budget", 0.0, static_cast<double>(m.horizon()), true, true);
  BudgetConfig cfg;
  cfg.budget = ctx.settings.real("budget");
  const CmdpSolution sol = solve_cmdp_dual(m, cfg);
  json doc = mixture_json(sol.policy, m.defer());
  doc["budget"] = cfg.budget;
  doc["value"] = sol.value;
  doc["advice_count"] = sol.advice_count;
  doc["beta_low"] = sol.beta_low;
  doc["beta_high"] = sol.beta_high;
  ctx.emit("cmdp.json", doc.dump() + "\n");
  ctx.emit("cmdp.csv", csv_sweep_header() + csv_sweep_row(cfg.budget, sol.value, sol.advice_count,
                                                          advised_state_steps(m, sol.policy)));
}

void cmd_eval(Context& ctx) {
  const envs::Environment env = make_environment(ctx.settings);
  const MachineMDP m = build_machine_mdp(env.mdp, env.policy, env.adherence);
  const MixturePolicy policy = load_policy(ctx.settings.text("policy"), m);
  const State s1 = m.initial_state();
  const double optimal = backward_induction(m).v(0, s1);
  const double value = initial_value(m, policy);
  const json doc = {{"value", value},
                    {"advice_count", expected_advice_count(m, policy)},
                    {"optimal_value", optimal},
                    {"human_value", human_value(m)(0, s1)},
                    {"value_gap", optimal - value}};
  ctx.emit("eval.json", doc.dump(2) + "\n");
}

void cmd_learn(Context& ctx, bool rfe) {
  Settings& s = ctx.settings;
  if (!s.has("algo")) s.set("algo", rfe ? "rfe-advice" : "ucb-ad");
  sim::Algorithm algo;
  try {
    algo = sim::parse_algorithm(s.text("algo"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--algo: ") + e.what());
  }
  const bool is_rfe = algo == sim::Algorithm::rfe_advice || algo == sim::Algorithm::rfe_beta;
  if (is_rfe != rfe) {
    throw UsageError(std::string("--algo: '") + s.text("algo") + "' does not belong to " +
                     ctx.command);
  }
  s.require("seed");
  check_positive_count(s, "episodes");
  check_positive_count(s, "replan-every");
  check_positive_count(s, "parallel-seeds");
  check_range(s, "delta", 0.0, 1.0, true, true);

  const envs::Environment env = make_environment(s);
  sim::RunConfig base;
  base.algorithm = algo;
  base.episodes = s.count("episodes");
  base.replan_every = s.count("replan-every");
  base.ucb.delta = base.rfe.delta = base.baseline.delta = s.real("delta");
  if (algo == sim::Algorithm::ucb_ad) {
    const std::string mode = s.text("width-mode");
    if (mode == "practical") {
      base.ucb.width_mode = WidthMode::practical;
    } else if (mode == "theory") {
      base.ucb.width_mode = WidthMode::theory;
    } else {
      throw UsageError("--width-mode: expected practical or theory, got '" + mode + "'");
    }
    if (!(s.real("width-scale") > 0.0)) throw UsageError("--width-scale must be positive");
    base.ucb.width_scale = s.real("width-scale");
  } else {
    if (!(s.real("bonus-scale") > 0.0)) throw UsageError("--bonus-scale must be positive");
    base.rfe.bonus_scale = base.baseline.bonus_scale = s.real("bonus-scale");
  }
  if (rfe) {
    check_range(s, "epsilon", 0.0, 1.0, true, false);
    base.rfe.epsilon = s.real("epsilon");
    base.rfe.known_reward = s.boolean("known-reward");
  }

  const std::uint64_t seed = s.count("seed");
  const std::size_t n = s.count("parallel-seeds");
  std::vector<sim::RunConfig> runs(n, base);
  for (std::size_t k = 0; k < n; ++k) {
    runs[k].seed = seed + k;
    const std::string name = "metrics_seed" + std::to_string(seed + k) + ".csv";
    runs[k].csv_path = ctx.out_dir / name;
    ctx.outputs.push_back(name);
  }
  const std::size_t threads =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<sim::RunResult> results = sim::run_many(env, runs, threads);
  for (const sim::RunConfig& r : runs) ctx.out << "wrote " << r.csv_path.string() << '\n';

  json per_seed = json::array();
  std::vector<sim::MetricsLog> logs;
  for (std::size_t k = 0; k < n; ++k) {
    const sim::RunResult& r = results[k];
    logs.push_back(r.log);
    json entry = {{"seed", seed + k},
                  {"episodes", r.episodes},
                  {"final_value_gap", r.log.final_value_gap()},
                  {"cumulative_regret", r.log.final_regret()}};
    if (rfe) entry["converged"] = r.converged;
    per_seed.push_back(std::move(entry));
  }
  json summary = {{"algorithm", std::string(sim::algorithm_name(algo))}, {"runs", per_seed}};

  if (n > 1) {
    try {
      const sim::MetricsLog mean = sim::mean_log(logs);
      ctx.emit("metrics_mean.csv", sim::to_csv(mean, sim::csv_schema(algo)));
      summary["mean_final_value_gap"] = mean.final_value_gap();
      summary["mean_cumulative_regret"] = mean.final_regret();
    } catch (const std::invalid_argument&) {
      // runs stopped at different episodes; per-seed logs only
      summary["mean_final_value_gap"] = nullptr;
    }
  }

  if (rfe) {
    const std::vector<double> betas = s.reals("betas");
    check_betas(betas, env.mdp.horizon());
    check_range(s, "budget", 0.0, static_cast<double>(env.mdp.horizon()), true, true);
    const MachineMDP truth = build_machine_mdp(env.mdp, env.policy, env.adherence);
    std::optional<std::span<const double>> known;
    if (base.rfe.known_reward) known = truth.rewards();
    BudgetConfig budget;
    budget.budget = s.real("budget");
    for (std::size_t k = 0; k < n; ++k) {
      const EmpiricalModel& model = *results[k].model;
      const std::string tag = "seed" + std::to_string(seed + k);
      const std::vector<DeterministicPolicy> policies = plan_stage2_beta(model, betas, known);
      for (std::size_t i = 0; i < betas.size(); ++i) {
        json doc = policy_json(policies[i], truth.defer());
        doc["beta"] = betas[i];
        ctx.emit("policy_" + tag + "_beta" + std::to_string(i) + ".json", doc.dump() + "\n");
      }
      const CmdpSolution sol = plan_stage2_cmdp(model, budget, known);
      json doc = mixture_json(sol.policy, truth.defer());
      doc["budget"] = budget.budget;
      ctx.emit("cmdp_" + tag + ".json", doc.dump() + "\n");
    }
  }
  ctx.emit("summary.json", summary.dump(2) + "\n");
}

json load_config_file(const fs::path& path, std::string& command) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw UsageError("--config: " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("--config: top level must be an object");
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw UsageError("--config: 'command' must be a string");
    command = doc["command"].get<std::string>();
  }
  json cfg = doc.contains("config") ? doc["config"] : json::object();
  if (!cfg.is_object()) throw UsageError("--config: 'config' must be an object");
  for (const auto& [key, value] : cfg.items()) {
    const auto& table = flag_table();
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const Flag& f) { return key == f.name; });
    if (it == table.end()) throw UsageError("--config: unknown key '" + key + "'");
    check_config_value(*it, value);
  }
  return cfg;
}

const std::vector<std::pair<const char*, const char*>>& subcommands() {
  static const std::vector<std::pair<const char*, const char*>> table = {
      {"plan", "Optimal advice policy by backward induction"},
      {"learn-ucb", "Learn advice with unknown adherence (UCB-AD or the optimistic baseline)"},
      {"learn-rfe", "Reward-free exploration, then stage-2 planning per beta and budget"},
      {"sweep-beta", "Pertinent advice policies over a grid of penalties"},
      {"cmdp", "Best advice policy under an expected advice budget"},
      {"eval", "Exact value and advice count of a policy file"},
  };
  return table;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adherence-aware advice: planning and learning when to advise a human."};
  app.name("advice");
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::pair<const Flag*, CLI::Option*>> bound;
  std::vector<std::string> raw(flag_table().size());
  for (std::size_t i = 0; i < flag_table().size(); ++i) {
    const Flag& f = flag_table()[i];
    CLI::Option* opt = nullptr;
    if (f.kind == Kind::boolean) {
      opt = app.add_flag(std::string("--") + f.name)->description(describe(f));
    } else {
      opt = app.add_option(std::string("--") + f.name, raw[i], describe(f))
                ->type_name(type_name(f.kind));
    }
    bound.emplace_back(&f, opt);
  }
  std::string config_path;
  std::string out_dir = "results";
  app.add_option("--config", config_path, "Manifest or config JSON; explicit flags override it");
  app.add_option("--out", out_dir, "Output directory (default: results)");
  for (const auto& [name, help] : subcommands()) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::string command;
    for (const auto& [name, help] : subcommands()) {
      if (app.got_subcommand(name)) command = name;
    }

    json values = json::object();
    for (const Flag& f : flag_table()) values[f.name] = f.fallback;
    if (!config_path.empty()) {
      std::string file_command;
      const json file = load_config_file(config_path, file_command);
      for (const auto& [key, value] : file.items()) values[key] = value;
      if (command.empty()) command = file_command;
    }
    if (command.empty()) {
      throw UsageError("a subcommand is required (plan, learn-ucb, learn-rfe, sweep-beta, "
                       "cmdp, eval)");
    }
    for (std::size_t i = 0; i < bound.size(); ++i) {
      const auto& [f, opt] = bound[i];
      if (opt->count() == 0) continue;
      values[f->name] = f->kind == Kind::boolean ? json(true) : parse_flag_value(*f, raw[i]);
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                                     ec.message());

    Context ctx{Settings(std::move(values)), command, fs::path(out_dir), out};
    if (command == "plan") {
      cmd_plan(ctx);
    } else if (command == "learn-ucb") {
      cmd_learn(ctx, false);
    } else if (command == "learn-rfe") {
      cmd_learn(ctx, true);
    } else if (command == "sweep-beta") {
      cmd_sweep_beta(ctx);
    } else if (command == "cmdp") {
      cmd_cmdp(ctx);
    } else if (command == "eval") {
      cmd_eval(ctx);
    } else {
      throw UsageError("unknown command '" + command + "'");
    }

    const json manifest = {{"command", command},
                           {"config", ctx.settings.values()},
                           {"git_revision", ADVICE_GIT_REVISION},
                           {"seed", ctx.settings.values().at("seed")},
                           {"outputs", ctx.outputs}};
    write_text(ctx.out_dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << (ctx.out_dir / "manifest.json").string() << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace advice::cli
