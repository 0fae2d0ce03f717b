#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stackelberg/bandit.hpp"
#include "stackelberg/game.hpp"

namespace stackelberg {

/// mu_i(pi, b) for every b.
Eigen::VectorXd mixed_payoffs(const Table& mean, const Eigen::VectorXd& strategy);

/// Follower actions within eps of the best response to a mixed leader strategy.
std::vector<int> mixed_best_response_set(const Table& mean_follower, const Eigen::VectorXd& strategy, double eps,
                                         double tolerance = kExactTolerance);

/// min (pessimistic) or max (optimistic) of mu1(pi, b) over the eps-best
/// responses to pi; lowest index on ties.
ResponseChoice mixed_response(const Table& mean_leader, const Table& mean_follower, const Eigen::VectorXd& strategy,
                              double eps, TieBreaking tie, double tolerance = kExactTolerance);

struct MixedPoint {
  Eigen::VectorXd strategy;
  int follower_action = 0;
  double value = 0.0;
  int lp_calls = 0;
};

/// sup over pi of phi_margin(pi) by enumerating (T, b*) with b* in T: pi must
/// make b* the follower's best action, keep every b in T within `margin` of
/// it, and push every b outside T below by margin + exclusion. Each cell is an
/// LP maximizing min_{b in T} mu1(pi, b). follower_action is the minimizer in
/// the winning T. Throws std::invalid_argument when B > max_follower_actions.
MixedPoint pessimistic_sup(const Table& mean_leader, const Table& mean_follower, double margin,
                           double exclusion = 1e-9, int max_follower_actions = 12);

/// All points of the simplex over `num_actions` with coordinates in multiples
/// of 1/resolution, in lexicographic order.
std::vector<Eigen::VectorXd> simplex_grid(int num_actions, int resolution);

/// max over candidates pi with psi_eps(pi) >= max psi_0 - eps of
/// psi_eps(pi) - psi_0(pi), where max psi_0 is solved exactly by LP. Restricting
/// to finitely many candidates gives a lower bound on the optimistic gap.
double optimistic_mixed_gap(const Table& mean_leader, const Table& mean_follower, double eps,
                            const std::vector<Eigen::VectorXd>& candidates);

struct SimultaneousLearnConfig {
  double epsilon = 0.25;
  double delta = 0.1;
  TieBreaking tie = TieBreaking::Optimistic;
  double hoeffding_constant = 32.0;
  int max_follower_actions = 12;
  double exclusion = 1e-9;
};

struct SimultaneousLearnResult {
  Eigen::VectorXd strategy;
  int follower_action = 0;
  double value_hat = 0.0;
  std::int64_t samples_per_pair = 0;
  std::int64_t total_queries = 0;
  int lp_calls = 0;
  Table mean_leader_hat;
  Table mean_follower_hat;
};

/// Uniform sampling, then the leader-strategy LP with slack 3 eps / 4.
SimultaneousLearnResult learn_simultaneous_optimistic(RewardOracle& oracle, const SimultaneousLearnConfig& config);

/// Uniform sampling, then pessimistic_sup on the estimates with margin 3 eps / 4.
SimultaneousLearnResult learn_simultaneous_pessimistic(RewardOracle& oracle, const SimultaneousLearnConfig& config);

/// Dispatches on config.tie.
SimultaneousLearnResult learn_simultaneous(RewardOracle& oracle, const SimultaneousLearnConfig& config);

}  // namespace stackelberg
