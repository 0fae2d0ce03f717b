#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stackelberg/random.hpp"

namespace stackelberg {

/// Mean-reward table indexed (leader action, follower action).
using Table = Eigen::MatrixXd;

/// Absolute tolerance for set membership on exact (noise-free) means.
inline constexpr double kExactTolerance = 1e-12;

enum class TieBreaking { Pessimistic, Optimistic };

enum class Channel { Leader = 1, Follower = 2 };

/// Observation noise around a mean reward.
class NoiseModel {
 public:
  enum class Kind { Bernoulli, Gaussian, Deterministic };

  static NoiseModel bernoulli() { return NoiseModel{Kind::Bernoulli, 0.0}; }
  static NoiseModel gaussian(double sigma);
  static NoiseModel deterministic() { return NoiseModel{Kind::Deterministic, 0.0}; }

  Kind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }

  /// Whether `mean` is admissible under this noise model.
  bool admits_mean(double mean) const noexcept;

  /// Draws one observation. Throws std::domain_error on an inadmissible mean.
  double sample(double mean, Rng& rng) const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  NoiseModel(Kind kind, double sigma) : kind_(kind), sigma_(sigma) {}

  Kind kind_;
  double sigma_;
};

struct RewardSample {
  double leader = 0.0;
  double follower = 0.0;
};

/// Two-player general-sum bandit game with exact mean tables.
/// The leader picks a row, the follower observes it and picks a column.
class BanditGame {
 public:
  /// Throws std::invalid_argument on shape mismatch, non-finite entries, or
  /// means incompatible with the noise model.
  BanditGame(Table mean_leader, Table mean_follower, NoiseModel noise);

  int num_leader_actions() const noexcept { return static_cast<int>(mean_leader_.rows()); }
  int num_follower_actions() const noexcept { return static_cast<int>(mean_leader_.cols()); }
  const Table& mean_leader() const noexcept { return mean_leader_; }
  const Table& mean_follower() const noexcept { return mean_follower_; }
  const NoiseModel& noise() const noexcept { return noise_; }

 private:
  Table mean_leader_;
  Table mean_follower_;
  NoiseModel noise_;
};

struct BestResponseSet {
  int leader_action = 0;
  double epsilon = 0.0;
  std::vector<int> members;  // ascending
};

struct ResponseChoice {
  int follower_action = 0;
  double value = 0.0;
};

struct StackelbergPoint {
  int leader_action = 0;
  double value = 0.0;
};

RewardSample sample_rewards(const BanditGame& game, int a, int b, Rng& rng);

/// {b : mu2(a,b) >= max_b' mu2(a,b') - eps - tolerance}.
BestResponseSet best_response_set(const Table& mean_follower, int a, double eps,
                                  double tolerance = kExactTolerance);

/// Leader's value against the tie-broken member of the eps-best-response set
/// (min for pessimistic, max for optimistic; lowest index on ties).
ResponseChoice tie_broken_response(const Table& mean_leader, const Table& mean_follower, int a,
                                   double eps, TieBreaking tie,
                                   double tolerance = kExactTolerance);

/// phi_eps(a) (pessimistic) or psi_eps(a) (optimistic).
double phi_value(const BanditGame& game, int a, double eps, TieBreaking tie);

/// Leader action maximizing phi_value; lowest index among ties.
StackelbergPoint stackelberg(const BanditGame& game, double eps, TieBreaking tie);

/// max_a phi_0(a) - max_a phi_eps(a).
double gap(const BanditGame& game, double eps);

/// Gap for optimistic tie-breaking: the largest psi_eps - psi_0 over leader
/// actions whose psi_eps is within eps of the best psi_0.
double optimistic_gap(const BanditGame& game, double eps);

/// Source of bandit feedback: one noisy (r1, r2) pair per query.
class RewardOracle {
 public:
  virtual ~RewardOracle() = default;
  virtual int num_leader_actions() const = 0;
  virtual int num_follower_actions() const = 0;
  virtual RewardSample query(int a, int b) = 0;

  std::int64_t queries_made() const noexcept { return queries_; }

 protected:
  void count_query() noexcept { ++queries_; }

 private:
  std::int64_t queries_ = 0;
};

/// Simulator for a BanditGame. Every (a, b) pair owns an independent stream
/// derived from the seed, so the k-th sample of a pair does not depend on the
/// order in which pairs are queried.
class GameSampler final : public RewardOracle {
 public:
  GameSampler(BanditGame game, std::uint64_t seed);

  int num_leader_actions() const override { return game_.num_leader_actions(); }
  int num_follower_actions() const override { return game_.num_follower_actions(); }
  RewardSample query(int a, int b) override;

  const BanditGame& game() const noexcept { return game_; }

 private:
  BanditGame game_;
  std::vector<Rng> streams_;
};

}  // namespace stackelberg
