#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stackelberg/mdp.hpp"

namespace stackelberg {

/// One observed step (h, s, b, r1, r2, s'); next_state is -1 at the last step.
struct Transition {
  int step = 0;
  int state = 0;
  int action = 0;
  double leader_reward = 0.0;
  double follower_reward = 0.0;
  int next_state = -1;
};

using Dataset = std::vector<Transition>;

struct ExploreConfig {
  /// Phase-1 episodes in total, split evenly over the H*S reach targets.
  std::int64_t exploration_episodes = 0;
  /// Phase-2 episodes; only these feed the empirical model.
  std::int64_t data_episodes = 0;
  double epsilon = 0.2;
  double delta = 0.1;
  /// Reach threshold for the coverage diagnostic; <= 0 means eps / (2 H^2 S).
  double significance = 0.0;
  /// Multiplies the sqrt(L / n) exploration bonus.
  double bonus_scale = 1.0;
  std::uint64_t seed = 0;
  /// Keep the phase-2 tuples in the result.
  bool keep_dataset = false;
};

/// Episode budgets with unit constants: N0 = m0 * H^7 S^4 B / eps and
/// N_data = m1 * H^5 S^2 B / eps^2, each rounded up and at least 1.
struct ExploreBudget {
  std::int64_t exploration_episodes = 0;
  std::int64_t data_episodes = 0;
};
ExploreBudget default_explore_budget(int horizon, int num_states, int num_actions, double eps,
                                     double exploration_multiplier = 1.0, double data_multiplier = 1.0);

/// Empirical model M-hat. Cells with no data get a uniform next-state
/// distribution and zero rewards.
struct EmpiricalModel {
  EpisodicMDP model;
  std::vector<std::int64_t> counts;  // per (h, s, b), same layout as rewards
};

/// Throws std::invalid_argument on out-of-range tuples or a missing/extra
/// successor (next_state must be -1 exactly at the last step).
EmpiricalModel build_empirical_model(int horizon, int num_states, int num_actions, int initial_state,
                                     const Dataset& data);

struct ExploreResult {
  EmpiricalModel empirical;
  std::int64_t episodes = 0;  // phase 1 + phase 2
  /// Smallest phase-2 visit fraction among cells whose state was reached in at
  /// least a `significance` fraction of phase-2 episodes.
  double min_significant_cell_mass = 0.0;
  Dataset dataset;  // filled only with keep_dataset
};

/// Two-phase reward-free exploration. Phase 1 runs an optimistic tabular
/// learner on the indicator reward of each (h, s) and records every episode's
/// greedy policy. Phase 2 draws a recorded policy uniformly, follows it up to
/// its target step and plays uniform actions from there on.
ExploreResult explore(EpisodeEnvironment& env, int initial_state, const ExploreConfig& config);

/// max over deterministic policies of |V_hat(pi) - V(pi)| on `channel`.
/// The maximum over all Markov policies is attained at a deterministic one.
/// Throws std::length_error if B^(H*S) exceeds `cap`.
double uniform_value_error(const EpisodicMDP& estimate, const EpisodicMDP& truth, Channel channel,
                           std::int64_t cap = 1 << 20);

/// Text dump: one line "h s b r1 r2 s'" per tuple, in collection order.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);

}  // namespace stackelberg
