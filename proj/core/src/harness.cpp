#include "stackelberg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "stackelberg/bandit.hpp"
#include "stackelberg/bandit_rl.hpp"
#include "stackelberg/linear.hpp"
#include "stackelberg/reward_free.hpp"
#include "stackelberg/serialization.hpp"
#include "stackelberg/simultaneous.hpp"

namespace stackelberg {

using nlohmann::json;

const char* to_string(Setting setting) noexcept {
  switch (setting) {
    case Setting::Bandit: return "bandit";
    case Setting::BanditRL: return "bandit-rl";
    case Setting::Linear: return "linear";
    case Setting::Simultaneous: return "simultaneous";
  }
  return "unknown";
}

Setting parse_setting(const std::string& name) {
  for (Setting s : {Setting::Bandit, Setting::BanditRL, Setting::Linear, Setting::Simultaneous}) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown setting '" + name + "'");
}

const char* to_string(TieBreaking tie) noexcept {
  return tie == TieBreaking::Pessimistic ? "pessimistic" : "optimistic";
}

TieBreaking parse_tie(const std::string& name) {
  if (name == "pessimistic") return TieBreaking::Pessimistic;
  if (name == "optimistic") return TieBreaking::Optimistic;
  throw std::invalid_argument("unknown tie-breaking '" + name + "'");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// Config I/O

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw std::invalid_argument(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(j,
                 {"setting", "instance", "eps_grid", "delta", "budget_multipliers", "trials", "base_seed", "tie",
                  "output", "hoeffding_constant", "rl", "grid_resolution", "max_follower_actions",
                  "record_wall_time", "threads"},
                 "config");
  ExperimentConfig c;
  if (!j.contains("setting")) throw std::invalid_argument("config needs 'setting'");
  c.setting = parse_setting(j.at("setting").get<std::string>());
  if (!j.contains("instance") || !j.at("instance").is_object()) throw std::invalid_argument("config needs 'instance'");
  const json& inst = j.at("instance");
  reject_unknown(inst, {"file", "family", "params", "seed", "noise"}, "instance");
  if (inst.contains("file")) c.instance.file = inst.at("file").get<std::string>();
  if (inst.contains("family")) c.instance.family = inst.at("family").get<std::string>();
  if (c.instance.file.has_value() == c.instance.family.has_value()) {
    throw std::invalid_argument("instance needs exactly one of 'file' and 'family'");
  }
  c.instance.params = get_or<std::map<std::string, double>>(inst, "params", {});
  if (inst.contains("seed")) c.instance.seed = inst.at("seed").get<std::uint64_t>();
  if (inst.contains("noise")) c.instance.noise = noise_from_json(inst.at("noise").dump());
  c.eps_grid = get_or<std::vector<double>>(j, "eps_grid", {});
  if (c.eps_grid.empty()) throw std::invalid_argument("eps_grid must be nonempty");
  for (double e : c.eps_grid) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps_grid entries must lie in (0, 1)");
  }
  c.delta = get_or(j, "delta", c.delta);
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  c.budget_multipliers = get_or(j, "budget_multipliers", c.budget_multipliers);
  if (c.budget_multipliers.empty()) throw std::invalid_argument("budget_multipliers must be nonempty");
  for (double m : c.budget_multipliers) {
    if (!(m > 0.0)) throw std::invalid_argument("budget multipliers must be positive");
  }
  c.trials = get_or(j, "trials", c.trials);
  if (c.trials < 1) throw std::invalid_argument("trials must be at least 1");
  c.base_seed = get_or(j, "base_seed", c.base_seed);
  c.tie = parse_tie(get_or<std::string>(j, "tie", "pessimistic"));
  c.output = get_or<std::string>(j, "output", "");
  c.hoeffding_constant = get_or(j, "hoeffding_constant", c.hoeffding_constant);
  if (!(c.hoeffding_constant > 0.0)) throw std::invalid_argument("hoeffding_constant must be positive");
  if (j.contains("rl")) {
    const json& rl = j.at("rl");
    reject_unknown(rl,
                   {"exploration_episodes", "data_episodes", "exploration_multiplier", "data_multiplier",
                    "bonus_scale"},
                   "rl");
    c.rl.exploration_episodes = get_or(rl, "exploration_episodes", c.rl.exploration_episodes);
    c.rl.data_episodes = get_or(rl, "data_episodes", c.rl.data_episodes);
    c.rl.exploration_multiplier = get_or(rl, "exploration_multiplier", c.rl.exploration_multiplier);
    c.rl.data_multiplier = get_or(rl, "data_multiplier", c.rl.data_multiplier);
    c.rl.bonus_scale = get_or(rl, "bonus_scale", c.rl.bonus_scale);
    if (c.rl.exploration_episodes < 0 || c.rl.data_episodes < 0 || !(c.rl.exploration_multiplier >= 0.0) ||
        !(c.rl.data_multiplier > 0.0) || !(c.rl.bonus_scale >= 0.0)) {
      throw std::invalid_argument("rl budget fields out of range");
    }
  }
  c.grid_resolution = get_or(j, "grid_resolution", c.grid_resolution);
  if (c.grid_resolution < 1) throw std::invalid_argument("grid_resolution must be positive");
  c.max_follower_actions = get_or(j, "max_follower_actions", c.max_follower_actions);
  c.record_wall_time = get_or(j, "record_wall_time", c.record_wall_time);
  c.threads = get_or(j, "threads", c.threads);
  if (c.threads < 1) throw std::invalid_argument("threads must be at least 1");
  return c;
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  json inst = json::object();
  if (c.instance.file) inst["file"] = *c.instance.file;
  if (c.instance.family) inst["family"] = *c.instance.family;
  if (!c.instance.params.empty()) inst["params"] = c.instance.params;
  if (c.instance.seed) inst["seed"] = *c.instance.seed;
  if (c.instance.noise) inst["noise"] = json::parse(noise_to_json(*c.instance.noise));
  json j = {{"setting", to_string(c.setting)},
            {"instance", inst},
            {"eps_grid", c.eps_grid},
            {"delta", c.delta},
            {"budget_multipliers", c.budget_multipliers},
            {"trials", c.trials},
            {"base_seed", c.base_seed},
            {"tie", to_string(c.tie)},
            {"output", c.output},
            {"hoeffding_constant", c.hoeffding_constant},
            {"rl",
             {{"exploration_episodes", c.rl.exploration_episodes},
              {"data_episodes", c.rl.data_episodes},
              {"exploration_multiplier", c.rl.exploration_multiplier},
              {"data_multiplier", c.rl.data_multiplier},
              {"bonus_scale", c.rl.bonus_scale}}},
            {"grid_resolution", c.grid_resolution},
            {"max_follower_actions", c.max_follower_actions},
            {"record_wall_time", c.record_wall_time},
            {"threads", c.threads}};
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Instances

namespace {

struct LoadedSource {
  std::string kind;  // document kind when file-backed
  std::string text;
};

bool is_tabular_family(const std::string& name) {
  try {
    parse_instance_family(name);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

BanditGame tabular_from_source(const InstanceSource& src, const LoadedSource& loaded, std::uint64_t seed) {
  if (src.file) {
    if (loaded.kind == "game") return game_from_json(loaded.text);
    if (loaded.kind == "instance") {
      InstanceDescriptor d = instance_from_json(loaded.text);
      if (src.noise) d.noise = src.noise;
      return make_game(d);
    }
    throw std::invalid_argument("instance file holds a '" + loaded.kind + "' document, expected a game");
  }
  InstanceDescriptor d;
  d.family = parse_instance_family(*src.family);
  d.params = src.params;
  d.seed = src.seed.value_or(seed);
  d.noise = src.noise;
  return make_game(d);
}

int int_param(const std::map<std::string, double>& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument(std::string("missing instance parameter '") + key + "'");
  if (it->second != std::floor(it->second) || it->second < 1 || it->second > 1e6) {
    throw std::invalid_argument(std::string("parameter '") + key + "' must be a positive integer");
  }
  return static_cast<int>(it->second);
}

void check_params(const std::map<std::string, double>& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw std::invalid_argument("unknown instance parameter '" + k + "'");
  }
}

BanditRLGame rl_from_source(const InstanceSource& src, const LoadedSource& loaded, std::uint64_t seed) {
  if (src.file && loaded.kind == "bandit-rl") return bandit_rl_from_json(loaded.text);
  if (src.family && *src.family == "random-bandit-rl") {
    check_params(src.params, {"A", "H", "S", "B"});
    Rng rng(src.seed.value_or(seed));
    return random_bandit_rl_game(int_param(src.params, "A"), int_param(src.params, "H"), int_param(src.params, "S"),
                                 int_param(src.params, "B"), rng, src.noise.value_or(NoiseModel::bernoulli()));
  }
  return embed_as_bandit_rl(tabular_from_source(src, loaded, seed));
}

LinearGame linear_from_source(const InstanceSource& src, const LoadedSource& loaded, std::uint64_t seed) {
  if (src.file && loaded.kind == "linear") return linear_game_from_json(loaded.text);
  if (src.family && *src.family == "random-linear") {
    check_params(src.params, {"A", "B", "d", "sigma"});
    Rng rng(src.seed.value_or(seed));
    auto it = src.params.find("sigma");
    return random_linear_game(int_param(src.params, "A"), int_param(src.params, "B"), int_param(src.params, "d"), rng,
                              it == src.params.end() ? 1.0 : it->second);
  }
  return one_hot_linear_embedding(tabular_from_source(src, loaded, seed));
}

std::string policy_digest(const Policy& policy) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (double p : policy.probabilities()) {
    h = mix64(h ^ static_cast<std::uint64_t>(std::llround(p * 1e9)));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "pi=%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string strategy_string(const Eigen::VectorXd& s) {
  std::string out = "pi=";
  char buf[32];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", s[i]);
    if (i) out += '|';
    out += buf;
  }
  return out;
}

std::string index_string(const char* prefix, int v) { return std::string(prefix) + std::to_string(v); }

// ---------------------------------------------------------------------------
// Trials

void evaluate_tabular(TrialRecord& r, const BanditGame& game, int a_hat, int b_hat, double eps, TieBreaking tie) {
  if (tie == TieBreaking::Pessimistic) {
    r.value_at_zero = phi_value(game, a_hat, 0.0, tie);
    r.value_at_half = phi_value(game, a_hat, eps / 2.0, tie);
    r.best_value = stackelberg(game, 0.0, tie).value;
    r.gap = gap(game, eps);
    r.theorem_ok = r.value_at_half >= r.best_value - r.gap - eps - kCheckTolerance;
  } else {
    r.value_at_zero = phi_value(game, a_hat, 0.0, tie);
    r.value_at_half = phi_value(game, a_hat, eps / 2.0, tie);
    r.best_value = stackelberg(game, 0.0, tie).value;
    r.gap = optimistic_gap(game, eps);
    r.theorem_ok = r.value_at_zero >= r.best_value - r.gap - eps - kCheckTolerance;
  }
  const auto& mu2 = game.mean_follower();
  r.follower_ok = mu2(a_hat, b_hat) >= mu2.row(a_hat).maxCoeff() - eps - kCheckTolerance;
}

void run_bandit(TrialRecord& r, const ExperimentConfig& c, const BanditGame& game, std::uint64_t learner_seed) {
  GameSampler sampler(game, learner_seed);
  BanditLearnConfig lc;
  lc.epsilon = r.epsilon;
  lc.delta = c.delta;
  lc.tie = c.tie;
  lc.hoeffding_constant = c.hoeffding_constant * r.budget_multiplier;
  lc.seed = learner_seed;
  const BanditLearnResult res = learn_bandit(sampler, lc);
  r.total_queries = res.total_queries;
  r.leader_choice = index_string("a=", res.leader_action);
  r.follower_choice = index_string("b=", res.follower_action);
  evaluate_tabular(r, game, res.leader_action, res.follower_action, r.epsilon, c.tie);
}

void run_linear(TrialRecord& r, const ExperimentConfig& c, const LinearGame& game, std::uint64_t learner_seed) {
  const BanditGame tabular = game.to_bandit_game();
  GameSampler sampler(tabular, learner_seed);
  LinearLearnConfig lc;
  lc.epsilon = r.epsilon;
  lc.delta = c.delta;
  lc.tie = c.tie;
  lc.hoeffding_constant = c.hoeffding_constant * r.budget_multiplier;
  const LinearLearnResult res = learn_linear(sampler, game.features(), lc);
  r.total_queries = res.total_queries;
  r.leader_choice = index_string("a=", res.leader_action);
  r.follower_choice = index_string("b=", res.follower_action);
  evaluate_tabular(r, tabular, res.leader_action, res.follower_action, r.epsilon, c.tie);
}

void run_bandit_rl(TrialRecord& r, const ExperimentConfig& c, const BanditRLGame& game, std::uint64_t learner_seed) {
  RLLearnConfig lc;
  lc.epsilon = r.epsilon;
  lc.delta = c.delta;
  lc.tie = c.tie;
  lc.bonus_scale = c.rl.bonus_scale;
  lc.seed = learner_seed;
  const double m = r.budget_multiplier;
  const ExploreBudget def = default_explore_budget(game.horizon(), game.num_states(), game.num_actions(), r.epsilon,
                                                   c.rl.exploration_multiplier * m, c.rl.data_multiplier * m);
  lc.exploration_episodes = c.rl.exploration_episodes > 0
                                ? static_cast<std::int64_t>(std::ceil(c.rl.exploration_episodes * m))
                                : def.exploration_episodes;
  lc.data_episodes = c.rl.data_episodes > 0 ? static_cast<std::int64_t>(std::ceil(c.rl.data_episodes * m))
                                            : def.data_episodes;
  const RLLearnResult res = learn_bandit_rl(game, lc);
  r.total_queries = res.total_episodes;
  r.leader_choice = index_string("a=", res.leader_action);
  r.follower_choice = policy_digest(res.policy);
  const int a = res.leader_action;
  const double eps = r.epsilon;
  r.value_at_zero = exact_phi_rl(game, a, 0.0, c.tie);
  r.value_at_half = exact_phi_rl(game, a, eps / 2.0, c.tie);
  r.best_value = exact_stackelberg_rl(game, 0.0, c.tie).value;
  if (c.tie == TieBreaking::Pessimistic) {
    r.gap = exact_gap_rl(game, eps);
    r.theorem_ok = r.value_at_half >= r.best_value - r.gap - eps - kCheckTolerance;
  } else {
    r.gap = exact_optimistic_gap_rl(game, eps);
    r.theorem_ok = r.value_at_zero >= r.best_value - r.gap - eps - kCheckTolerance;
  }
  r.follower_ok = policy_value(game.arm(a), res.policy, Channel::Follower) >=
                  follower_optimum(game, a) - eps - kCheckTolerance;
}

void run_simultaneous(TrialRecord& r, const ExperimentConfig& c, const BanditGame& game, std::uint64_t learner_seed) {
  GameSampler sampler(game, learner_seed);
  SimultaneousLearnConfig lc;
  lc.epsilon = r.epsilon;
  lc.delta = c.delta;
  lc.tie = c.tie;
  lc.hoeffding_constant = c.hoeffding_constant * r.budget_multiplier;
  lc.max_follower_actions = c.max_follower_actions;
  const SimultaneousLearnResult res = learn_simultaneous(sampler, lc);
  r.total_queries = res.total_queries;
  r.leader_choice = strategy_string(res.strategy);
  r.follower_choice = index_string("b=", res.follower_action);
  const Table& mu1 = game.mean_leader();
  const Table& mu2 = game.mean_follower();
  const double eps = r.epsilon;
  r.value_at_zero = mixed_response(mu1, mu2, res.strategy, 0.0, c.tie).value;
  r.value_at_half = mixed_response(mu1, mu2, res.strategy, eps / 2.0, c.tie).value;
  if (c.tie == TieBreaking::Pessimistic) {
    r.best_value = pessimistic_sup(mu1, mu2, 0.0, 1e-9, c.max_follower_actions).value;
    r.gap = r.best_value - pessimistic_sup(mu1, mu2, eps, 1e-9, c.max_follower_actions).value;
    r.theorem_ok = r.value_at_half >= r.best_value - r.gap - eps - kCheckTolerance;
  } else {
    r.best_value = best_mixed_leader_strategy(mu1, mu2, 0.0).value;
    std::vector<Eigen::VectorXd> candidates = simplex_grid(game.num_leader_actions(), c.grid_resolution);
    candidates.push_back(res.strategy);
    r.gap = optimistic_mixed_gap(mu1, mu2, eps, candidates);
    r.theorem_ok = r.value_at_zero >= r.best_value - r.gap - eps - kCheckTolerance;
  }
  const Eigen::VectorXd v2 = mixed_payoffs(mu2, res.strategy);
  r.follower_ok = v2[res.follower_action] >= v2.maxCoeff() - eps - kCheckTolerance;
}

TrialRecord run_trial(const ExperimentConfig& c, const LoadedSource& loaded, int cell, int trial) {
  TrialRecord r;
  r.setting = c.setting;
  r.tie = c.tie;
  r.cell = cell;
  r.trial = trial;
  const std::size_t nm = c.budget_multipliers.size();
  r.epsilon = c.eps_grid[static_cast<std::size_t>(cell) / nm];
  r.budget_multiplier = c.budget_multipliers[static_cast<std::size_t>(cell) % nm];
  r.seed = derive_seed(c.base_seed, {static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial)});
  const std::uint64_t instance_seed = derive_seed(r.seed, {1});
  const std::uint64_t learner_seed = derive_seed(r.seed, {2});
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (c.setting) {
      case Setting::Bandit:
        run_bandit(r, c, tabular_from_source(c.instance, loaded, instance_seed), learner_seed);
        break;
      case Setting::Simultaneous:
        run_simultaneous(r, c, tabular_from_source(c.instance, loaded, instance_seed), learner_seed);
        break;
      case Setting::Linear:
        run_linear(r, c, linear_from_source(c.instance, loaded, instance_seed), learner_seed);
        break;
      case Setting::BanditRL:
        run_bandit_rl(r, c, rl_from_source(c.instance, loaded, instance_seed), learner_seed);
        break;
    }
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.value_at_zero = r.value_at_half = r.best_value = r.gap = nan;
    r.theorem_ok = r.follower_ok = false;
    r.error = e.what();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  if (config.eps_grid.empty() || config.budget_multipliers.empty() || config.trials < 1) {
    throw std::invalid_argument("experiment needs a nonempty grid and at least one trial");
  }
  LoadedSource loaded;
  if (config.instance.file) {
    loaded.text = read_text_file(*config.instance.file);
    loaded.kind = detect_document_kind(loaded.text);
  } else if (!config.instance.family) {
    throw std::invalid_argument("instance needs a file or a family");
  } else if (!is_tabular_family(*config.instance.family) && *config.instance.family != "random-bandit-rl" &&
             *config.instance.family != "random-linear") {
    throw std::invalid_argument("unknown instance family '" + *config.instance.family + "'");
  }
  const int cells = static_cast<int>(config.eps_grid.size() * config.budget_multipliers.size());
  const std::size_t total = static_cast<std::size_t>(cells) * static_cast<std::size_t>(config.trials);
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      records[i] = run_trial(config, loaded, static_cast<int>(i / config.trials), static_cast<int>(i % config.trials));
    }
  };
  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

std::string records_csv_header(bool with_wall_time) {
  std::string h =
      "setting,tie,cell,trial,seed,epsilon,budget_multiplier,n_total_queries,leader_choice,follower_choice,"
      "phi0_hat,phi_half_hat,max_phi0,gap,theorem_ok,follower_ok,error";
  if (with_wall_time) h += ",wall_seconds";
  return h + "\n";
}

std::string records_to_csv(const std::vector<TrialRecord>& records, bool with_wall_time) {
  std::ostringstream out;
  out << records_csv_header(with_wall_time);
  for (const TrialRecord& r : records) {
    out << to_string(r.setting) << ',' << to_string(r.tie) << ',' << r.cell << ',' << r.trial << ',' << r.seed << ','
        << format_number(r.epsilon) << ',' << format_number(r.budget_multiplier) << ',' << r.total_queries << ','
        << csv_escape(r.leader_choice) << ',' << csv_escape(r.follower_choice) << ','
        << format_number(r.value_at_zero) << ',' << format_number(r.value_at_half) << ','
        << format_number(r.best_value) << ',' << format_number(r.gap) << ',' << (r.theorem_ok ? 1 : 0) << ','
        << (r.follower_ok ? 1 : 0) << ',' << csv_escape(r.error);
    if (with_wall_time) out << ',' << format_number(r.wall_seconds);
    out << '\n';
  }
  return out.str();
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials < 1) throw std::invalid_argument("Wilson interval needs at least one trial");
  if (successes < 0 || successes > trials) throw std::invalid_argument("successes out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {p, lower, upper};
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("nothing to summarize");
  std::map<int, CellSummary> cells;
  std::map<int, double> deficit_sum, query_sum;
  std::map<int, std::int64_t> deficit_count;
  for (const TrialRecord& r : records) {
    CellSummary& s = cells[r.cell];
    s.cell = r.cell;
    s.epsilon = r.epsilon;
    s.budget_multiplier = r.budget_multiplier;
    ++s.trials;
    if (!r.error.empty()) ++s.errors;
    s.theorem_successes += r.theorem_ok ? 1 : 0;
    s.follower_successes += r.follower_ok ? 1 : 0;
    query_sum[r.cell] += static_cast<double>(r.total_queries);
    if (r.error.empty()) {
      deficit_sum[r.cell] += r.best_value - r.value_at_zero;
      ++deficit_count[r.cell];
    }
  }
  std::vector<CellSummary> out;
  for (auto& [cell, s] : cells) {
    s.theorem = wilson_interval(s.theorem_successes, s.trials);
    s.follower = wilson_interval(s.follower_successes, s.trials);
    s.mean_queries = query_sum[cell] / static_cast<double>(s.trials);
    s.mean_deficit = deficit_count[cell] ? deficit_sum[cell] / static_cast<double>(deficit_count[cell])
                                         : std::numeric_limits<double>::quiet_NaN();
    out.push_back(s);
  }
  return out;
}

std::string summary_to_csv(const std::vector<CellSummary>& summary) {
  std::ostringstream out;
  out << "cell,epsilon,budget_multiplier,trials,errors,theorem_rate,theorem_lo,theorem_hi,follower_rate,"
         "follower_lo,follower_hi,mean_deficit,mean_queries\n";
  for (const CellSummary& s : summary) {
    out << s.cell << ',' << format_number(s.epsilon) << ',' << format_number(s.budget_multiplier) << ',' << s.trials
        << ',' << s.errors << ',' << format_number(s.theorem.rate) << ',' << format_number(s.theorem.lower) << ','
        << format_number(s.theorem.upper) << ',' << format_number(s.follower.rate) << ','
        << format_number(s.follower.lower) << ',' << format_number(s.follower.upper) << ','
        << format_number(s.mean_deficit) << ',' << format_number(s.mean_queries) << '\n';
  }
  return out.str();
}

std::vector<GapCurvePoint> gap_curve(const BanditGame& game, const std::vector<double>& eps_grid) {
  std::vector<GapCurvePoint> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    if (!(eps >= 0.0)) throw std::invalid_argument("epsilon grid entries must be nonnegative");
    out.push_back({eps, stackelberg(game, eps, TieBreaking::Pessimistic).value, gap(game, eps)});
  }
  return out;
}

std::string gap_curve_to_csv(const std::vector<GapCurvePoint>& curve) {
  std::ostringstream out;
  out << "epsilon,max_phi,gap\n";
  for (const GapCurvePoint& p : curve) {
    out << format_number(p.epsilon) << ',' << format_number(p.max_phi) << ',' << format_number(p.gap) << '\n';
  }
  return out.str();
}

}  // namespace stackelberg
