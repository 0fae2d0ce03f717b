// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run every criterion
//   acceptance <id>...    run the named ones
// Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stackelberg/bandit.hpp"
#include "stackelberg/bandit_rl.hpp"
#include "stackelberg/harness.hpp"
#include "stackelberg/instances.hpp"
#include "stackelberg/linear.hpp"
#include "stackelberg/response_lp.hpp"
#include "stackelberg/reward_free.hpp"
#include "stackelberg/simultaneous.hpp"

namespace sl = stackelberg;
using sl::Channel;
using sl::TieBreaking;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::string rate_text(int hits, int n) {
  const auto w = sl::wilson_interval(hits, n);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d/%d=%.3f [%.3f,%.3f]", hits, n, w.rate, w.lower, w.upper);
  return buf;
}

std::uint64_t key(int i) { return static_cast<std::uint64_t>(i); }

// ---------------------------------------------------------------------------

void exact_oracles(Outcome& o) {
  constexpr double tol = 1e-9;
  const auto t2 = sl::table2_game();
  o.require(std::abs(sl::phi_value(t2, 0, 0.0, TieBreaking::Pessimistic) - 2.0) <= tol, "table2 phi0(a1)");
  o.require(std::abs(sl::phi_value(t2, 1, 0.0, TieBreaking::Pessimistic) - 3.0) <= tol, "table2 phi0(a2)");
  const auto mixed = sl::best_mixed_leader_strategy(t2.mean_leader(), t2.mean_follower(), 0.0);
  o.require(std::abs(mixed.value - 3.5) <= tol, "table2 mixed LP value");
  o.require(std::abs(mixed.strategy[0] - 0.5) <= tol && std::abs(mixed.strategy[1] - 0.5) <= tol,
            "table2 mixed LP strategy");

  for (std::int64_t n : {1, 7, 100, 10000}) {
    const auto pair = sl::lower_bound_pair(n);
    for (int s = 0; s < 2; ++s) {
      const auto& g = s == 0 ? pair.positive : pair.negative;
      const double want0 = s == 0 ? 1.0 : 0.0;
      o.require(std::abs(sl::phi_value(g, 0, 0.0, TieBreaking::Pessimistic) - want0) <= tol &&
                    std::abs(sl::phi_value(g, 1, 0.0, TieBreaking::Pessimistic) - 0.5) <= tol,
                "lower-bound pair phi0 vector at n=" + std::to_string(n));
    }
  }

  for (double e2 : {0.05, 0.2, 0.5, 0.9}) {
    o.require(std::abs(sl::gap(sl::gap_instance(0.0, e2), e2) - 0.5) <= tol, "gap_instance gap");
  }

  sl::Rng rng(20240611);
  int zero_sum = 0, coop = 0;
  for (int i = 0; i < 100; ++i) {
    const int A = 2 + i % 5, B = 2 + (i / 5) % 5;
    const auto zs = sl::random_game(A, B, sl::GameStructure::ZeroSum, rng);
    const auto co = sl::random_game(A, B, sl::GameStructure::Cooperative, rng);
    for (double eps : {0.05, 0.2, 0.5}) {
      zero_sum += std::abs(sl::gap(zs, eps)) <= tol;
      coop += sl::gap(co, eps) <= eps + tol;
    }
  }
  o.require(zero_sum == 300, "zero-sum gap " + std::to_string(zero_sum) + "/300");
  o.require(coop == 300, "cooperative gap " + std::to_string(coop) + "/300");
  o.detail << "table2 (2,3) mixed 3.5; pair vectors ok; zero-sum " << zero_sum << "/300; cooperative " << coop
           << "/300";
}

void bandit_frequency(Outcome& o) {
  const double eps = 0.25, delta = 0.1;
  const int trials = 200;
  int theorem = 0, follower = 0;
  for (int t = 0; t < trials; ++t) {
    sl::Rng rng(sl::derive_seed(3201, {key(t)}));
    const auto g = sl::random_game(5, 5, sl::GameStructure::General, rng);
    sl::GameSampler sampler(g, sl::derive_seed(3202, {key(t)}));
    sl::BanditLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    cfg.hoeffding_constant = 32.0;
    const auto res = sl::learn_bandit(sampler, cfg);
    const auto& mu1 = g.mean_leader();
    const auto& mu2 = g.mean_follower();
    theorem += oracle::phi(mu1, mu2, res.leader_action, eps / 2.0, true) >=
               oracle::max_phi(mu1, mu2, 0.0, true) - oracle::gap(mu1, mu2, eps) - eps - 1e-9;
    follower += mu2(res.leader_action, res.follower_action) >= mu2.row(res.leader_action).maxCoeff() - eps - 1e-9;
  }
  o.require(theorem >= 170, "value inequality below 85%");
  o.require(follower >= 170, "follower inequality below 85%");
  o.detail << "value " << rate_text(theorem, trials) << ", follower " << rate_text(follower, trials)
           << (theorem >= 180 && follower >= 180 ? ", both >= 90%" : ", below 90% but within binomial tolerance");
}

void br_sandwich(Outcome& o) {
  int held = 0;
  const int games = 1000;
  for (int i = 0; i < games; ++i) {
    sl::Rng rng(sl::derive_seed(3300, {key(i)}));
    const int A = 2 + i % 4, B = 2 + (i / 4) % 7;
    const double eps = std::array<double, 4>{0.05, 0.1, 0.2, 0.4}[static_cast<std::size_t>(i % 4)];
    const auto g = sl::random_game(A, B, sl::GameStructure::General, rng);
    // Every entry moved by exactly eps/8 in a random direction.
    std::bernoulli_distribution sign(0.5);
    sl::Table noisy = g.mean_follower();
    for (Eigen::Index k = 0; k < noisy.size(); ++k) noisy.data()[k] += (sign(rng) ? 1.0 : -1.0) * eps / 8.0;
    const auto res = sl::select_from_estimates(g.mean_leader(), noisy, eps, TieBreaking::Pessimistic);
    bool ok = true;
    for (int a = 0; a < A; ++a) {
      const auto inner = oracle::br_set(g.mean_follower(), a, eps / 2.0);
      const auto outer = oracle::br_set(g.mean_follower(), a, eps);
      const auto& mid = res.response_sets[static_cast<std::size_t>(a)];
      ok = ok && std::includes(mid.begin(), mid.end(), inner.begin(), inner.end()) &&
           std::includes(outer.begin(), outer.end(), mid.begin(), mid.end());
    }
    held += ok;
  }
  o.require(held == games, "sandwich violated");
  o.detail << held << "/" << games << " games";
}

void lp_oracle(Outcome& o) {
  int matched = 0, flow_ok = 0, cases = 0;
  double worst = 0.0, worst_flow = 0.0;
  for (int i = 0; i < 100; ++i) {
    sl::Rng rng(sl::derive_seed(3400, {key(i)}));
    const int H = 1 + i % 2, S = 1 + (i / 2) % 2, B = 1 + (i / 4) % 3;
    const auto m = sl::random_mdp(H, S, B, rng);
    const double v2 = sl::value_iteration(m, Channel::Follower).value;
    for (double slack : {0.0, 0.1, 0.3, 1.0}) {
      const double t = v2 - slack;
      const auto w = sl::worst_case_best_response(m, t);
      const auto b = sl::best_case_best_response(m, t);
      const double ew = std::abs(w.leader_value - *oracle::constrained_value(m, t, true));
      const double eb = std::abs(b.leader_value - *oracle::constrained_value(m, t, false));
      const double fw = std::max(sl::occupancy_violation(m, w.occupancy), sl::occupancy_violation(m, b.occupancy));
      worst = std::max({worst, ew, eb});
      worst_flow = std::max(worst_flow, fw);
      matched += ew <= 2e-3 && eb <= 2e-3;
      flow_ok += fw <= 1e-8;
      ++cases;
    }
  }
  o.require(matched == cases, "value mismatch");
  o.require(flow_ok == cases, "flow residual");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d values within 2e-3 (max err %.2e), flow %d/%d (max %.2e)", matched, cases,
                worst, flow_ok, cases, worst_flow);
  o.detail << buf;
}

void bandit_rl_frequency(Outcome& o) {
  const double eps = 0.25, delta = 0.1;
  // Unit-constant budgets, multipliers pinned at 1.
  const auto budget = sl::default_explore_budget(2, 2, 2, eps, 1.0, 1.0);
  const int trials = 100;
  int theorem = 0, follower = 0;
  for (int t = 0; t < trials; ++t) {
    sl::Rng rng(sl::derive_seed(4100, {key(t)}));
    const auto game = sl::random_bandit_rl_game(2, 2, 2, 2, rng);
    sl::RLLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    cfg.exploration_episodes = budget.exploration_episodes;
    cfg.data_episodes = budget.data_episodes;
    cfg.seed = sl::derive_seed(4101, {key(t)});
    const auto res = sl::learn_bandit_rl(game, cfg);
    const int a = res.leader_action;
    const double best0 = sl::exact_stackelberg_rl(game, 0.0, TieBreaking::Pessimistic).value;
    theorem += sl::exact_phi_rl(game, a, eps / 2.0, TieBreaking::Pessimistic) >=
               best0 - sl::exact_gap_rl(game, eps) - eps - 1e-9;
    follower += sl::policy_value(game.arm(a), res.policy, Channel::Follower) >=
                sl::follower_optimum(game, a) - eps - 1e-9;
  }
  o.require(theorem >= 85, "value inequality below 85%");
  o.require(follower >= 85, "follower inequality below 85%");
  o.detail << "N0=" << budget.exploration_episodes << " Ndata=" << budget.data_episodes << " per arm; value "
           << rate_text(theorem, trials) << ", follower " << rate_text(follower, trials);
}

// Pinned budgets for H=3, S=3, B=2 at eps=0.2.
constexpr std::int64_t kRewardFreeExploration = 2000;
constexpr std::int64_t kRewardFreeData = 20000;

void reward_free(Outcome& o) {
  const double eps = 0.2;
  const int runs = 100;
  int ok = 0;
  double worst = 0.0;
  std::vector<double> errs;
  for (int r = 0; r < runs; ++r) {
    sl::Rng rng(sl::derive_seed(4200, {key(r)}));
    const auto m = sl::random_mdp(3, 3, 2, rng);
    sl::MdpSimulator env(m, sl::derive_seed(4201, {key(r)}));
    sl::ExploreConfig cfg;
    cfg.exploration_episodes = kRewardFreeExploration;
    cfg.data_episodes = kRewardFreeData;
    cfg.epsilon = eps;
    cfg.seed = sl::derive_seed(4202, {key(r)});
    const auto res = sl::explore(env, 0, cfg);
    const double e = std::max(sl::uniform_value_error(res.empirical.model, m, Channel::Leader),
                              sl::uniform_value_error(res.empirical.model, m, Channel::Follower));
    errs.push_back(e);
    worst = std::max(worst, e);
    ok += e <= eps;
  }
  std::sort(errs.begin(), errs.end());
  o.require(ok >= 90, "uniform error within eps below 90%");
  char buf[200];
  std::snprintf(buf, sizeof buf, "N0=%lld Ndata=%lld; %s within %.2f, median err %.4f, max %.4f",
                static_cast<long long>(kRewardFreeExploration), static_cast<long long>(kRewardFreeData),
                rate_text(ok, runs).c_str(), eps, errs[errs.size() / 2], worst);
  o.detail << buf;
}

void core_set(Outcome& o) {
  int lev_ok = 0, size_ok = 0;
  const int sets = 50;
  double worst_ratio = 0.0;
  std::size_t largest = 0;
  for (int i = 0; i < sets; ++i) {
    sl::Rng rng(sl::derive_seed(5000, {key(i)}));
    const int d = 2 + i % 7;
    std::uniform_int_distribution<int> rows(d, 1000);
    const int n = rows(rng);
    Eigen::MatrixXd f(n, d);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> scale(0.05, 2.0);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < d; ++c) f(r, c) = g(rng);
      if (i % 2) f.row(r) *= scale(rng);  // mixed norms on every other set
    }
    const auto k = sl::core_set(f);
    // Exhaustive scan with an independently formed design matrix.
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < k.members.size(); ++j) {
      const Eigen::VectorXd x = f.row(k.members[j]).transpose();
      V += k.weights[static_cast<Eigen::Index>(j)] * x * x.transpose();
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(V);
    double lev = 0.0;
    for (int r = 0; r < n; ++r) lev = std::max(lev, f.row(r).dot(llt.solve(f.row(r).transpose())));
    const double bound = 4.0 * d * std::log(std::log(static_cast<double>(d))) + 16.0;
    lev_ok += lev <= 2.0 * d * (1.0 + 1e-9);
    size_ok += static_cast<double>(k.members.size()) <= bound;
    worst_ratio = std::max(worst_ratio, lev / d);
    largest = std::max(largest, k.members.size());
  }
  o.require(lev_ok == sets, "leverage bound");
  o.require(size_ok == sets, "size bound");
  char buf[160];
  std::snprintf(buf, sizeof buf, "leverage %d/%d (max lev/d %.4f), size %d/%d (largest |K| %zu)", lev_ok, sets,
                worst_ratio, size_ok, sets, largest);
  o.detail << buf;
}

void linear_frequency(Outcome& o) {
  const double eps = 0.25, delta = 0.1;
  const int trials = 200;
  int theorem = 0, follower = 0, exact_queries = 0;
  for (int t = 0; t < trials; ++t) {
    sl::Rng rng(sl::derive_seed(5100, {key(t)}));
    const auto lg = sl::random_linear_game(20, 20, 4, rng, 0.5);
    sl::GameSampler sampler(lg.to_bandit_game(), sl::derive_seed(5101, {key(t)}));
    sl::LinearLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    const auto res = sl::learn_linear(sampler, lg.features(), cfg);
    const std::int64_t n = sl::linear_sample_budget(4, eps, delta);
    const std::int64_t bound = n * static_cast<std::int64_t>(res.core.members.size());
    exact_queries += res.total_queries == bound && sampler.queries_made() == bound;
    const auto mu1 = lg.mean_leader(), mu2 = lg.mean_follower();
    theorem += oracle::phi(mu1, mu2, res.leader_action, eps / 2.0, true) >=
               oracle::max_phi(mu1, mu2, 0.0, true) - oracle::gap(mu1, mu2, eps) - eps - 1e-9;
    follower += mu2(res.leader_action, res.follower_action) >= mu2.row(res.leader_action).maxCoeff() - eps - 1e-9;
  }
  o.require(theorem >= 180, "value inequality below 90%");
  o.require(exact_queries == trials, "query count differs from N*|K|");
  o.detail << "value " << rate_text(theorem, trials) << ", follower " << rate_text(follower, trials)
           << ", queries == N*|K| in " << exact_queries << "/" << trials;
}

void tabular_linear(Outcome& o) {
  int same = 0;
  double worst = 0.0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    sl::Rng rng(sl::derive_seed(5200, {key(s)}));
    const int A = 2 + s % 3, B = 2 + (s / 3) % 3;
    const auto g = sl::random_game(A, B, sl::GameStructure::General, rng);
    const auto lg = sl::one_hot_linear_embedding(g);
    const double eps = 0.3;
    const std::int64_t n = sl::sample_budget(A, B, eps, 0.1);
    const std::uint64_t stream = sl::derive_seed(5201, {key(s)});
    sl::GameSampler s_tab(g, stream), s_lin(g, stream);
    const auto tab = sl::learn_bandit_with_budget(s_tab, n, eps, TieBreaking::Pessimistic);
    sl::LinearLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.samples_per_member = n;
    const auto lin = sl::learn_linear(s_lin, lg.features(), cfg);
    double err = 0.0;
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        err = std::max({err, std::abs(lin.theta_leader_hat[a * B + b] - tab.mean_leader_hat(a, b)),
                        std::abs(lin.theta_follower_hat[a * B + b] - tab.mean_follower_hat(a, b))});
      }
    }
    worst = std::max(worst, err);
    same += err <= 1e-10 && lin.leader_action == tab.leader_action && lin.follower_action == tab.follower_action;
  }
  o.require(same == seeds, "embedding diverged");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d seeds identical, max |theta-mu| %.2e", same, seeds, worst);
  o.detail << buf;
}

void simultaneous_frequency(Outcome& o) {
  const double eps = 0.25, delta = 0.1;
  const int trials = 200;
  int theorem = 0, follower = 0, lp_ok = 0;
  const auto grid = sl::simplex_grid(3, 60);
  for (int t = 0; t < trials; ++t) {
    sl::Rng rng(sl::derive_seed(6100, {key(t)}));
    const auto g = sl::random_game(3, 3, sl::GameStructure::General, rng);
    sl::GameSampler sampler(g, sl::derive_seed(6101, {key(t)}));
    sl::SimultaneousLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    cfg.tie = TieBreaking::Optimistic;
    const auto res = sl::learn_simultaneous(sampler, cfg);
    lp_ok += res.lp_calls <= g.num_follower_actions();
    const auto& mu1 = g.mean_leader();
    const auto& mu2 = g.mean_follower();
    auto cands = grid;
    cands.push_back(res.strategy);
    const double best = sl::best_mixed_leader_strategy(mu1, mu2, 0.0).value;
    // Maximum over a finite candidate set: a lower bound on the true gap.
    const double gap = sl::optimistic_mixed_gap(mu1, mu2, eps, cands);
    theorem += oracle::mixed_value(mu1, mu2, res.strategy, 0.0, false) >= best - gap - eps - 1e-9;
    const Eigen::VectorXd w = mu2.transpose() * res.strategy;
    follower += w[res.follower_action] >= w.maxCoeff() - eps - 1e-9;
  }
  o.require(theorem >= 180, "value inequality below 90%");
  o.require(lp_ok == trials, "more than B LP calls");
  o.detail << "value " << rate_text(theorem, trials) << ", follower " << rate_text(follower, trials)
           << ", LP calls <= B in " << lp_ok << "/" << trials;
}

void lower_bound(Outcome& o) {
  sl::Rng rng(7100);
  std::uniform_real_distribution<double> ueps(0.005, 1.0 / (4.0 * std::sqrt(2.0)) - 1e-3), ug(0.0, 0.25);
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int A = 1 + i % 5, third = 1 + (i / 5) % 4, B = 3 * third;
    const double eps = ueps(rng), g = i == 0 ? 0.0 : (i == 1 ? 0.25 : ug(rng));
    const int a = i % A, b1 = i % third, b2 = third + (i * 7) % third;
    const auto game = sl::lower_bound_family(A, B, eps, g, a, b1, b2);
    const double got = oracle::gap(game.mean_leader(), game.mean_follower(), eps);
    const double lib = sl::gap(game, eps);
    worst = std::max({worst, std::abs(got - g), std::abs(lib - g)});
    ok += std::abs(got - g) <= 1e-9 && std::abs(lib - g) <= 1e-9;
  }
  const auto pair = sl::lower_bound_pair(50);
  o.require(sl::phi_value(pair.positive, 0, 0.0, TieBreaking::Pessimistic) == 1.0 &&
                sl::phi_value(pair.negative, 0, 0.0, TieBreaking::Pessimistic) == 0.0,
            "pair values");
  o.require(std::abs(sl::gap(sl::gap_instance(0.1, 0.3), 0.3) - 0.5) <= 1e-9, "gap instance");
  o.require(ok == 50, "family gap != g");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/50 parameterizations, max |gap-g| %.2e", ok, worst);
  o.detail << buf;
}

void determinism(Outcome& o) {
  std::vector<sl::ExperimentConfig> configs;
  auto base = [](sl::Setting s) {
    sl::ExperimentConfig c;
    c.setting = s;
    c.instance.family = "random-general";
    c.instance.params = {{"A", 3}, {"B", 3}};
    c.eps_grid = {0.2, 0.4};
    c.budget_multipliers = {0.25, 1.0};
    c.trials = 4;
    c.base_seed = 99;
    return c;
  };
  configs.push_back(base(sl::Setting::Bandit));
  configs.push_back(base(sl::Setting::Linear));
  auto sim = base(sl::Setting::Simultaneous);
  sim.tie = TieBreaking::Optimistic;
  configs.push_back(sim);
  auto rl = base(sl::Setting::BanditRL);
  rl.instance.family = "random-bandit-rl";
  rl.instance.params = {{"A", 2}, {"H", 2}, {"S", 2}, {"B", 2}};
  rl.rl.exploration_episodes = 200;
  rl.rl.data_episodes = 1000;
  configs.push_back(rl);
  int identical = 0;
  for (auto& c : configs) {
    const auto first = sl::records_to_csv(sl::run_experiment(c), false);
    c.threads = 2;
    const auto second = sl::records_to_csv(sl::run_experiment(c), false);
    const bool same = first == second;
    identical += same;
    if (!same) o.require(false, std::string(sl::to_string(c.setting)) + " output differs");
  }
  // Learners on their own.
  sl::Rng rng(1);
  const auto g = sl::random_game(4, 4, sl::GameStructure::General, rng);
  sl::GameSampler s1(g, 5), s2(g, 5);
  const auto x = sl::learn_bandit(s1, sl::BanditLearnConfig{});
  const auto y = sl::learn_bandit(s2, sl::BanditLearnConfig{});
  o.require(x.mean_leader_hat == y.mean_leader_hat && x.mean_follower_hat == y.mean_follower_hat,
            "bandit estimates differ");
  o.detail << identical << "/" << configs.size() << " settings byte-identical across reruns";
}

struct Criterion {
  const char* id;
  double time_limit_s;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"exact-oracles", 1.0, exact_oracles},
      {"bandit-frequency", 120.0, bandit_frequency},
      {"br-sandwich", 10.0, br_sandwich},
      {"lp-oracle", 60.0, lp_oracle},
      {"bandit-rl-frequency", 600.0, bandit_rl_frequency},
      {"reward-free", 300.0, reward_free},
      {"core-set", 30.0, core_set},
      {"linear-frequency", 120.0, linear_frequency},
      {"tabular-linear", 60.0, tabular_linear},
      {"simultaneous-frequency", 120.0, simultaneous_frequency},
      {"lower-bound", 10.0, lower_bound},
      {"determinism", 120.0, determinism},
  };
  return all;
}

bool run_one(const Criterion& c) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > c.time_limit_s) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "runtime %.2fs over %.0fs limit", secs, c.time_limit_s);
    o.require(false, buf);
  }
  std::printf("%s %s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, o.detail.str().c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<const Criterion*> selected;
  if (argc <= 1) {
    for (const auto& c : criteria()) selected.push_back(&c);
  } else {
    for (int i = 1; i < argc; ++i) {
      const auto it = std::find_if(criteria().begin(), criteria().end(),
                                   [&](const Criterion& c) { return std::string(argv[i]) == c.id; });
      if (it == criteria().end()) {
        std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
        return 2;
      }
      selected.push_back(&*it);
    }
  }
  bool all = true;
  for (const Criterion* c : selected) all = run_one(*c) && all;
  return all ? 0 : 1;
}
