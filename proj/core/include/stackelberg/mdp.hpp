#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stackelberg/game.hpp"

namespace stackelberg {

/// Tabular finite-horizon MDP with a deterministic initial state and two
/// reward channels (leader, follower).
///
/// Steps are 0-based: h = 0..H-1. Transitions exist for h = 0..H-2 only; the
/// last step has no successor. Storage is flat and row-major:
///   transitions[((h * S + s) * B + b) * S + s']
///   rewards[(h * S + s) * B + b]
class EpisodicMDP {
 public:
  /// Throws std::invalid_argument if sizes disagree, a transition row is not
  /// a distribution (1e-9), a mean is non-finite or inadmissible for the
  /// noise model, or the initial state is out of range.
  EpisodicMDP(int horizon, int num_states, int num_actions, std::vector<double> transitions,
              std::vector<double> reward_leader, std::vector<double> reward_follower,
              int initial_state, NoiseModel noise);

  int horizon() const noexcept { return horizon_; }
  int num_states() const noexcept { return num_states_; }
  int num_actions() const noexcept { return num_actions_; }
  int initial_state() const noexcept { return initial_state_; }
  const NoiseModel& noise() const noexcept { return noise_; }

  std::size_t cell(int h, int s, int b) const noexcept {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + b;
  }
  std::size_t num_cells() const noexcept {
    return static_cast<std::size_t>(horizon_) * num_states_ * num_actions_;
  }

  std::span<const double> transition_row(int h, int s, int b) const;
  double reward(Channel channel, int h, int s, int b) const { return rewards(channel)[cell(h, s, b)]; }
  const std::vector<double>& rewards(Channel channel) const noexcept {
    return channel == Channel::Leader ? reward_leader_ : reward_follower_;
  }
  const std::vector<double>& transitions() const noexcept { return transitions_; }

  /// Same dynamics, different reward tables.
  EpisodicMDP with_rewards(std::vector<double> reward_leader, std::vector<double> reward_follower) const;

 private:
  int horizon_;
  int num_states_;
  int num_actions_;
  std::vector<double> transitions_;
  std::vector<double> reward_leader_;
  std::vector<double> reward_follower_;
  int initial_state_;
  NoiseModel noise_;
};

/// Markov policy: one action distribution per (h, s).
class Policy {
 public:
  /// Empty placeholder (zero dimensions).
  Policy() = default;
  /// Throws std::invalid_argument unless each row is a distribution (1e-9).
  Policy(int horizon, int num_states, int num_actions, std::vector<double> probabilities);

  static Policy uniform(int horizon, int num_states, int num_actions);
  /// actions[h * S + s] is the action taken at (h, s).
  static Policy deterministic(int horizon, int num_states, int num_actions, std::span<const int> actions);

  int horizon() const noexcept { return horizon_; }
  int num_states() const noexcept { return num_states_; }
  int num_actions() const noexcept { return num_actions_; }
  double prob(int h, int s, int b) const noexcept {
    return probabilities_[(static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + b];
  }
  std::span<const double> row(int h, int s) const noexcept {
    return {probabilities_.data() + (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_,
            static_cast<std::size_t>(num_actions_)};
  }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  bool is_deterministic() const noexcept;

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> probabilities_;
};

/// State-action visitation probabilities d_h(s, b), same flat layout as rewards.
struct OccupancyMeasure {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> d;

  double at(int h, int s, int b) const noexcept {
    return d[(static_cast<std::size_t>(h) * num_states + s) * num_actions + b];
  }
};

struct PlanningResult {
  double value = 0.0;
  Policy policy;
};

/// Exact expected return of `policy` on the mean rewards of `channel`.
double policy_value(const EpisodicMDP& mdp, const Policy& policy, Channel channel);

/// sum_{h,s,b} d_h(s,b) r_h(s,b).
double occupancy_value(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy, Channel channel);

/// Backward induction; deterministic greedy policy, lowest action on ties.
PlanningResult value_iteration(const EpisodicMDP& mdp, Channel channel);

OccupancyMeasure occupancy_of_policy(const EpisodicMDP& mdp, const Policy& policy);

/// Largest absolute residual among the occupancy constraints (initial-step
/// mass, flow conservation); negative entries count as residuals too.
double occupancy_violation(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy);

/// pi_h(b|s) = d_h(s,b) / sum_b' d_h(s,b'), uniform where the state has zero
/// mass. Throws std::invalid_argument if `occupancy` violates the occupancy
/// constraints by more than `tolerance`.
Policy policy_of_occupancy(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy,
                           double tolerance = 1e-8);

/// All B^(H*S) deterministic Markov policies. Throws std::length_error when
/// that count exceeds `cap`.
std::vector<Policy> enumerate_deterministic_policies(const EpisodicMDP& mdp, std::int64_t cap);

/// Observed transition of one episode step.
struct StepOutcome {
  double leader_reward = 0.0;
  double follower_reward = 0.0;
  int next_state = -1;  // -1 after the last step
};

/// Episodic interaction protocol: reset() starts an episode and returns the
/// initial state; step() must then be called exactly H times.
class EpisodeEnvironment {
 public:
  virtual ~EpisodeEnvironment() = default;
  virtual int horizon() const = 0;
  virtual int num_states() const = 0;
  virtual int num_actions() const = 0;
  virtual int reset() = 0;
  virtual StepOutcome step(int action) = 0;

  std::int64_t episodes_started() const noexcept { return episodes_; }

 protected:
  void count_episode() noexcept { ++episodes_; }

 private:
  std::int64_t episodes_ = 0;
};

class MdpSimulator final : public EpisodeEnvironment {
 public:
  MdpSimulator(EpisodicMDP mdp, std::uint64_t seed);

  int horizon() const override { return mdp_.horizon(); }
  int num_states() const override { return mdp_.num_states(); }
  int num_actions() const override { return mdp_.num_actions(); }
  int reset() override;
  StepOutcome step(int action) override;

  const EpisodicMDP& mdp() const noexcept { return mdp_; }

 private:
  EpisodicMDP mdp_;
  Rng rng_;
  int step_ = 0;
  int state_ = 0;
  bool active_ = false;
};

/// Draws an action from a discrete distribution (inverse CDF, lowest index
/// absorbs rounding).
int sample_index(std::span<const double> probabilities, Rng& rng);

}  // namespace stackelberg
