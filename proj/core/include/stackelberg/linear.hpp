#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stackelberg/bandit.hpp"
#include "stackelberg/game.hpp"

namespace stackelberg {

/// Feature table: row a * B + b holds phi(a, b) in R^d.
using FeatureTable = Eigen::MatrixXd;

/// Linear bandit game: mean rewards are phi(a,b)' theta_i.
class LinearGame {
 public:
  /// Throws std::invalid_argument on shape mismatch or non-finite data.
  LinearGame(int num_leader, int num_follower, FeatureTable features, Eigen::VectorXd theta_leader,
             Eigen::VectorXd theta_follower, NoiseModel noise);

  int num_leader_actions() const noexcept { return num_leader_; }
  int num_follower_actions() const noexcept { return num_follower_; }
  int dimension() const noexcept { return static_cast<int>(features_.cols()); }
  const FeatureTable& features() const noexcept { return features_; }
  const Eigen::VectorXd& theta_leader() const noexcept { return theta_leader_; }
  const Eigen::VectorXd& theta_follower() const noexcept { return theta_follower_; }
  const NoiseModel& noise() const noexcept { return noise_; }

  Table mean_leader() const;
  Table mean_follower() const;
  /// Tabular view with the same means and noise.
  BanditGame to_bandit_game() const;

 private:
  int num_leader_;
  int num_follower_;
  FeatureTable features_;
  Eigen::VectorXd theta_leader_;
  Eigen::VectorXd theta_follower_;
  NoiseModel noise_;
};

/// Weighted support set of the feature rows with bounded leverage.
struct CoreSet {
  std::vector<int> members;  // row indices into the feature table, ascending
  Eigen::VectorXd weights;   // one per member, sums to 1
  /// Orthonormal basis (d x r) of the feature span; identity when full rank.
  Eigen::MatrixXd basis;
  int rank = 0;
  /// max over all rows of phi' V(rho)^-1 phi in span coordinates.
  double max_leverage = 0.0;
  int iterations = 0;
};

/// Frank-Wolfe with away steps for the D-optimal design, started from a greedy
/// volumetric basis with uniform weights. Stops once every row has leverage at
/// most `leverage_factor * rank`. Throws std::invalid_argument on an empty or
/// all-zero table, std::runtime_error if the bound is not reached.
CoreSet core_set(const FeatureTable& features, double leverage_factor = 2.0, int max_iterations = 100000);

/// max_i phi_i' V(rho)^-1 phi_i over all rows, recomputed from scratch.
double max_leverage(const FeatureTable& features, const CoreSet& core);

/// theta = V(rho)^-1 sum_j rho_j phi_j mu_j, solved in span coordinates and
/// lifted back. `member_means` is aligned with core.members.
Eigen::VectorXd weighted_least_squares(const FeatureTable& features, const CoreSet& core,
                                       const Eigen::VectorXd& member_means);

/// N = ceil(C * d * ln(4d/delta) / eps^2), at least 1.
std::int64_t linear_sample_budget(int dimension, double eps, double delta, double hoeffding_constant = 32.0);

struct LinearLearnConfig {
  double epsilon = 0.25;
  double delta = 0.1;
  TieBreaking tie = TieBreaking::Pessimistic;
  double hoeffding_constant = 32.0;
  /// Overrides the per-member budget when positive.
  std::int64_t samples_per_member = 0;
};

struct LinearLearnResult {
  int leader_action = 0;
  int follower_action = 0;
  Eigen::VectorXd theta_leader_hat;
  Eigen::VectorXd theta_follower_hat;
  CoreSet core;
  std::int64_t samples_per_member = 0;
  std::int64_t total_queries = 0;
  Table mean_leader_hat;
  Table mean_follower_hat;
  std::vector<double> values;
};

/// Queries only core-set members; the oracle's action grid must match the
/// feature table (A * B rows).
LinearLearnResult learn_linear(RewardOracle& oracle, const FeatureTable& features, const LinearLearnConfig& config);

}  // namespace stackelberg
