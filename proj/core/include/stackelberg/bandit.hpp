#pragma once

#include <cstdint>
#include <vector>

#include "stackelberg/game.hpp"

namespace stackelberg {

struct BanditLearnConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  TieBreaking tie = TieBreaking::Pessimistic;
  /// Multiplies ln(4AB/delta)/eps^2. 32 makes every entry eps/8-accurate
  /// w.p. 1-delta for rewards bounded in [0,1].
  double hoeffding_constant = 32.0;
  std::uint64_t seed = 0;
};

struct BanditLearnResult {
  int leader_action = 0;
  int follower_action = 0;
  std::int64_t samples_per_pair = 0;
  std::int64_t total_queries = 0;
  Table mean_leader_hat;
  Table mean_follower_hat;
  /// Estimated 3eps/4-best-response set of every leader action.
  std::vector<std::vector<int>> response_sets;
  /// Estimated phi (or psi) at margin 3eps/4, one entry per leader action.
  std::vector<double> values;
};

/// N = ceil(C * ln(4AB/delta) / eps^2). Throws std::invalid_argument on
/// out-of-range inputs.
std::int64_t sample_budget(int num_leader, int num_follower, double eps, double delta,
                           double hoeffding_constant = 32.0);

/// Queries every (a, b) exactly `samples_per_pair` times, row-major, and
/// returns the empirical mean tables.
struct EmpiricalMeans {
  Table leader;
  Table follower;
};
EmpiricalMeans estimate_means(RewardOracle& oracle, std::int64_t samples_per_pair);

/// Plug-in Stackelberg selection on estimated means with margin 3eps/4.
/// Membership uses the plain inequality (no tolerance).
BanditLearnResult select_from_estimates(const Table& mean_leader_hat, const Table& mean_follower_hat,
                                        double eps, TieBreaking tie);

/// Uniform-allocation learner with the budget from sample_budget().
BanditLearnResult learn_bandit(RewardOracle& oracle, const BanditLearnConfig& config);

/// Same learner with an explicit per-pair budget.
BanditLearnResult learn_bandit_with_budget(RewardOracle& oracle, std::int64_t samples_per_pair,
                                           double eps, TieBreaking tie);

}  // namespace stackelberg
