#pragma once

#include <cstdint>
#include <vector>

#include "stackelberg/mdp.hpp"
#include "stackelberg/response_lp.hpp"
#include "stackelberg/reward_free.hpp"

namespace stackelberg {

/// The leader picks an arm a; the follower then plays the episodic MDP M^a.
class BanditRLGame {
 public:
  /// Throws std::invalid_argument if `arms` is empty or shapes/initial states differ.
  explicit BanditRLGame(std::vector<EpisodicMDP> arms);

  int num_arms() const noexcept { return static_cast<int>(arms_.size()); }
  const EpisodicMDP& arm(int a) const;
  const std::vector<EpisodicMDP>& arms() const noexcept { return arms_; }
  int horizon() const noexcept { return arms_.front().horizon(); }
  int num_states() const noexcept { return arms_.front().num_states(); }
  int num_actions() const noexcept { return arms_.front().num_actions(); }
  int initial_state() const noexcept { return arms_.front().initial_state(); }

 private:
  std::vector<EpisodicMDP> arms_;
};

struct RLLearnConfig {
  double epsilon = 0.25;
  double delta = 0.1;
  TieBreaking tie = TieBreaking::Pessimistic;
  std::int64_t exploration_episodes = 0;  // per arm
  std::int64_t data_episodes = 0;         // per arm
  double bonus_scale = 1.0;
  std::uint64_t seed = 0;
};

struct RLArmEstimate {
  EmpiricalModel empirical;
  double follower_optimum_hat = 0.0;  // V2-hat star(a)
  double value_hat = 0.0;             // LP value at threshold V2-hat star(a) - 3 eps / 4
  Policy policy;                      // LP follower policy on the empirical model
  std::int64_t episodes = 0;
  double min_significant_cell_mass = 0.0;
};

struct RLLearnResult {
  int leader_action = 0;
  Policy policy;
  std::vector<double> values;
  std::vector<RLArmEstimate> arms;
  std::int64_t total_episodes = 0;
};

/// Learner over caller-supplied per-arm environments.
RLLearnResult learn_bandit_rl(std::vector<EpisodeEnvironment*> arms, int initial_state,
                              const RLLearnConfig& config);

/// Simulates every arm with its own seeded MdpSimulator.
RLLearnResult learn_bandit_rl(const BanditRLGame& game, const RLLearnConfig& config);

/// Exact phi_eps(a) (pessimistic) or psi_eps(a) (optimistic) over mixed
/// follower policies: the response LP on the true model with threshold
/// V2*(a) - eps.
double exact_phi_rl(const BanditRLGame& game, int a, double eps, TieBreaking tie);

/// max over arms of exact_phi_rl; lowest arm on ties.
StackelbergPoint exact_stackelberg_rl(const BanditRLGame& game, double eps, TieBreaking tie);

/// max phi_0 - max phi_eps.
double exact_gap_rl(const BanditRLGame& game, double eps);

/// max over {a : psi_eps(a) >= max psi_0 - eps} of psi_eps(a) - psi_0(a).
double exact_optimistic_gap_rl(const BanditRLGame& game, double eps);

double follower_optimum(const BanditRLGame& game, int a);

}  // namespace stackelberg
