#include "stackelberg/reward_free.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace stackelberg {

namespace {

class ModelAccumulator {
 public:
  ModelAccumulator(int H, int S, int B)
      : H_(H), S_(S), B_(B),
        counts_(static_cast<std::size_t>(H) * S * B, 0),
        next_counts_(static_cast<std::size_t>(H) * S * B * S, 0),
        sum1_(counts_.size(), 0.0),
        sum2_(counts_.size(), 0.0) {}

  std::size_t cell(int h, int s, int b) const { return (static_cast<std::size_t>(h) * S_ + s) * B_ + b; }

  void add(const Transition& t) {
    if (t.step < 0 || t.step >= H_ || t.state < 0 || t.state >= S_ || t.action < 0 || t.action >= B_) {
      throw std::invalid_argument("transition index out of range");
    }
    const bool last = t.step == H_ - 1;
    if (last ? t.next_state != -1 : (t.next_state < 0 || t.next_state >= S_)) {
      throw std::invalid_argument("transition successor inconsistent with its step");
    }
    if (!std::isfinite(t.leader_reward) || !std::isfinite(t.follower_reward)) {
      throw std::invalid_argument("transition reward is not finite");
    }
    const std::size_t c = cell(t.step, t.state, t.action);
    ++counts_[c];
    sum1_[c] += t.leader_reward;
    sum2_[c] += t.follower_reward;
    if (!last) ++next_counts_[c * S_ + t.next_state];
  }

  std::int64_t count(int h, int s, int b) const { return counts_[cell(h, s, b)]; }
  std::int64_t next_count(int h, int s, int b, int t) const { return next_counts_[cell(h, s, b) * S_ + t]; }

  EmpiricalModel finish(int initial_state) const {
    std::vector<double> P(static_cast<std::size_t>(H_ - 1) * S_ * B_ * S_, 0.0);
    std::vector<double> r1(counts_.size(), 0.0), r2(counts_.size(), 0.0);
    for (std::size_t c = 0; c < counts_.size(); ++c) {
      if (counts_[c] == 0) continue;
      r1[c] = sum1_[c] / static_cast<double>(counts_[c]);
      r2[c] = sum2_[c] / static_cast<double>(counts_[c]);
    }
    for (std::size_t c = 0; c < P.size() / S_; ++c) {
      for (int t = 0; t < S_; ++t) {
        P[c * S_ + t] = counts_[c] == 0 ? 1.0 / S_
                                        : static_cast<double>(next_counts_[c * S_ + t]) / counts_[c];
      }
    }
    return {EpisodicMDP(H_, S_, B_, std::move(P), std::move(r1), std::move(r2), initial_state,
                        NoiseModel::deterministic()),
            counts_};
  }

 private:
  int H_, S_, B_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> next_counts_;
  std::vector<double> sum1_, sum2_;
};

// Greedy actions for steps 0..target_step-1 of the optimistic reach planner.
std::vector<int> optimistic_reach_policy(const ModelAccumulator& acc, int S, int B, int target_step,
                                         int target_state, double log_term, double bonus_scale) {
  std::vector<int> actions(static_cast<std::size_t>(target_step) * S, 0);
  std::vector<double> v(S, 0.0);
  v[target_state] = 1.0;
  for (int h = target_step - 1; h >= 0; --h) {
    std::vector<double> vh(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      for (int b = 0; b < B; ++b) {
        const std::int64_t n = acc.count(h, s, b);
        double q = 1.0;
        if (n > 0) {
          double expected = 0.0;
          for (int t = 0; t < S; ++t) expected += static_cast<double>(acc.next_count(h, s, b, t)) * v[t];
          expected /= static_cast<double>(n);
          q = std::min(1.0, expected + bonus_scale * std::sqrt(log_term / static_cast<double>(n)));
        }
        if (q > best) {
          best = q;
          actions[static_cast<std::size_t>(h) * S + s] = b;
        }
      }
      vh[s] = best;
    }
    v = std::move(vh);
  }
  return actions;
}

struct TargetPolicies {
  int step = 0;
  std::vector<std::vector<int>> policies;
};

// Runs one episode: recorded actions before `switch_step`, uniform from there on.
template <typename Sink>
void run_episode(EpisodeEnvironment& env, const std::vector<int>& actions, int switch_step, Rng& rng,
                 Sink&& sink) {
  const int H = env.horizon(), S = env.num_states(), B = env.num_actions();
  std::uniform_int_distribution<int> uniform_action(0, B - 1);
  int s = env.reset();
  for (int h = 0; h < H; ++h) {
    const int b = h < switch_step ? actions[static_cast<std::size_t>(h) * S + s] : uniform_action(rng);
    const StepOutcome o = env.step(b);
    sink(Transition{h, s, b, o.leader_reward, o.follower_reward, o.next_state});
    s = o.next_state;
  }
}

}  // namespace

ExploreBudget default_explore_budget(int horizon, int num_states, int num_actions, double eps,
                                     double exploration_multiplier, double data_multiplier) {
  if (horizon < 1 || num_states < 1 || num_actions < 1) throw std::invalid_argument("sizes must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(exploration_multiplier >= 0.0) || !(data_multiplier > 0.0)) {
    throw std::invalid_argument("budget multipliers must be nonnegative (data: positive)");
  }
  const double H = horizon, S = num_states, B = num_actions;
  const double n0 = exploration_multiplier * std::pow(H, 7) * std::pow(S, 4) * B / eps;
  const double nd = data_multiplier * std::pow(H, 5) * S * S * B / (eps * eps);
  return {std::max<std::int64_t>(exploration_multiplier > 0.0 ? 1 : 0, static_cast<std::int64_t>(std::ceil(n0))),
          std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(nd)))};
}

EmpiricalModel build_empirical_model(int horizon, int num_states, int num_actions, int initial_state,
                                     const Dataset& data) {
  if (horizon < 1 || num_states < 1 || num_actions < 1) throw std::invalid_argument("sizes must be positive");
  ModelAccumulator acc(horizon, num_states, num_actions);
  for (const Transition& t : data) acc.add(t);
  return acc.finish(initial_state);
}

ExploreResult explore(EpisodeEnvironment& env, int initial_state, const ExploreConfig& config) {
  const int H = env.horizon(), S = env.num_states(), B = env.num_actions();
  if (config.exploration_episodes < 0 || config.data_episodes < 1) {
    throw std::invalid_argument("explore needs a nonnegative phase-1 and a positive phase-2 budget");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (initial_state < 0 || initial_state >= S) throw std::invalid_argument("initial state out of range");
  const double significance = config.significance > 0.0
                                  ? config.significance
                                  : config.epsilon / (2.0 * H * H * S);
  Rng rng(derive_seed(config.seed, {0x52465845ULL}));
  const std::int64_t start = env.episodes_started();

  // Phase 1.
  ModelAccumulator phase1(H, S, B);
  const int num_targets = H * S;
  const double log_term =
      std::log(4.0 * H * S * B * static_cast<double>(std::max<std::int64_t>(1, config.exploration_episodes)) /
               config.delta);
  std::vector<TargetPolicies> psi(num_targets);
  for (int target = 0; target < num_targets; ++target) {
    const int th = target / S, ts = target % S;
    psi[target].step = th;
    const std::int64_t k = config.exploration_episodes / num_targets +
                           (target < config.exploration_episodes % num_targets ? 1 : 0);
    for (std::int64_t e = 0; e < k; ++e) {
      std::vector<int> actions = optimistic_reach_policy(phase1, S, B, th, ts, log_term, config.bonus_scale);
      run_episode(env, actions, th, rng, [&](const Transition& t) { phase1.add(t); });
      psi[target].policies.push_back(std::move(actions));
    }
    if (k == 0) {
      psi[target].policies.push_back(optimistic_reach_policy(phase1, S, B, th, ts, log_term, config.bonus_scale));
    }
  }

  // Phase 2.
  ModelAccumulator phase2(H, S, B);
  ExploreResult out{EmpiricalModel{EpisodicMDP(1, 1, 1, {}, {0.0}, {0.0}, 0, NoiseModel::deterministic()), {}},
                    0, 0.0, {}};
  std::uniform_int_distribution<int> pick_target(0, num_targets - 1);
  std::vector<std::int64_t> state_visits(static_cast<std::size_t>(H) * S, 0);
  for (std::int64_t e = 0; e < config.data_episodes; ++e) {
    const TargetPolicies& tp = psi[pick_target(rng)];
    std::uniform_int_distribution<std::size_t> pick_policy(0, tp.policies.size() - 1);
    const std::vector<int>& actions = tp.policies[pick_policy(rng)];
    run_episode(env, actions, tp.step, rng, [&](const Transition& t) {
      phase2.add(t);
      ++state_visits[static_cast<std::size_t>(t.step) * S + t.state];
      if (config.keep_dataset) out.dataset.push_back(t);
    });
  }
  out.empirical = phase2.finish(initial_state);
  out.episodes = env.episodes_started() - start;

  const double nd = static_cast<double>(config.data_episodes);
  double min_mass = 1.0;
  bool any = false;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      if (static_cast<double>(state_visits[static_cast<std::size_t>(h) * S + s]) / nd < significance) continue;
      any = true;
      for (int b = 0; b < B; ++b) min_mass = std::min(min_mass, static_cast<double>(phase2.count(h, s, b)) / nd);
    }
  }
  out.min_significant_cell_mass = any ? min_mass : 0.0;
  return out;
}

double uniform_value_error(const EpisodicMDP& estimate, const EpisodicMDP& truth, Channel channel,
                           std::int64_t cap) {
  if (estimate.horizon() != truth.horizon() || estimate.num_states() != truth.num_states() ||
      estimate.num_actions() != truth.num_actions()) {
    throw std::invalid_argument("models differ in shape");
  }
  double worst = 0.0;
  for (const Policy& pi : enumerate_deterministic_policies(truth, cap)) {
    worst = std::max(worst, std::abs(policy_value(estimate, pi, channel) - policy_value(truth, pi, channel)));
  }
  return worst;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  const auto old = out.precision(17);
  for (const Transition& t : data) {
    out << t.step << ' ' << t.state << ' ' << t.action << ' ' << t.leader_reward << ' ' << t.follower_reward
        << ' ' << t.next_state << '\n';
  }
  out.precision(old);
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Transition t;
    if (!(fields >> t.step >> t.state >> t.action >> t.leader_reward >> t.follower_reward >> t.next_state)) {
      throw std::invalid_argument("malformed dataset record on line " + std::to_string(lineno));
    }
    std::string extra;
    if (fields >> extra) throw std::invalid_argument("trailing fields on line " + std::to_string(lineno));
    data.push_back(t);
  }
  return data;
}

}  // namespace stackelberg
