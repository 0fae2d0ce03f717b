#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "stackelberg/bandit_rl.hpp"
#include "stackelberg/game.hpp"
#include "stackelberg/linear.hpp"
#include "stackelberg/mdp.hpp"

namespace stackelberg {

/// 2x2 simultaneous-play example whose Stackelberg leader strategy is mixed.
/// Means exceed [0, 1], so the default noise is deterministic.
BanditGame table2_game(NoiseModel noise = NoiseModel::deterministic());

struct GamePair {
  BanditGame positive;  // M_1
  BanditGame negative;  // M_-1
  double delta = 0.0;
};

/// Two 2x2 Bernoulli games that differ only in mu2 of row a1, with
/// delta = 1 / sqrt(13.5 n). Throws std::invalid_argument if n < 1.
GamePair lower_bound_pair(std::int64_t n);

/// Deterministic 2x2 game with mu2(a1, b1) = (eps1 + eps2) / 2 whose optimal
/// value drops by 1/2 between eps1 and eps2. Requires 0 <= eps1 < eps2 < 1.
BanditGame gap_instance(double eps1, double eps2, NoiseModel noise = NoiseModel::deterministic());

/// Hard family indexed by (a_star, b1_star, b2_star), 0-based. B must be a
/// multiple of 3, b1_star in the first third, b2_star in the second third,
/// 0 < eps < 1/(4 sqrt 2), 0 <= g <= 1/4.
BanditGame lower_bound_family(int num_leader, int num_follower, double eps, double g, int a_star, int b1_star,
                              int b2_star, NoiseModel noise = NoiseModel::bernoulli());

enum class GameStructure { General, ZeroSum, Cooperative };

/// Means i.i.d. uniform on [0, 1]; zero-sum uses mu1 = 1 - mu2, cooperative mu1 = mu2.
BanditGame random_game(int num_leader, int num_follower, GameStructure structure, Rng& rng,
                       NoiseModel noise = NoiseModel::bernoulli());

/// Transition rows uniform on the simplex, rewards uniform on [0, 1], s1 = 0.
EpisodicMDP random_mdp(int horizon, int num_states, int num_actions, Rng& rng,
                       NoiseModel noise = NoiseModel::bernoulli());

BanditRLGame random_bandit_rl_game(int num_arms, int horizon, int num_states, int num_actions, Rng& rng,
                                   NoiseModel noise = NoiseModel::bernoulli());

/// Features and both parameters uniform on the unit sphere of R^d; Gaussian noise.
LinearGame random_linear_game(int num_leader, int num_follower, int dimension, Rng& rng, double sigma = 1.0);

/// d = A * B, phi(a, b) = e_{a*B+b}, theta_i = row-major flatten of mu_i.
LinearGame one_hot_linear_embedding(const BanditGame& game);

/// Arm a becomes a one-step, one-state MDP with action rewards mu_i(a, .).
BanditRLGame embed_as_bandit_rl(const BanditGame& game);

enum class InstanceFamily {
  LowerBoundPair,
  GapInstance,
  LowerBoundFamily,
  Table2,
  RandomGeneral,
  RandomZeroSum,
  RandomCooperative,
};

const char* to_string(InstanceFamily family) noexcept;
/// Accepts the kebab-case names ("gap-instance", "random-zero-sum", ...).
InstanceFamily parse_instance_family(const std::string& name);

struct InstanceDescriptor {
  InstanceFamily family = InstanceFamily::RandomGeneral;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::optional<NoiseModel> noise;
};

/// Builds the game named by the descriptor. Parameters per family:
///   lower-bound-pair: n, sign (+1 or -1, default +1)
///   gap-instance: eps1, eps2
///   lower-bound-family: A, B, eps, g, a_star, b1_star, b2_star
///   table2: none
///   random-*: A, B
/// Throws std::invalid_argument on missing or unknown parameters.
BanditGame make_game(const InstanceDescriptor& descriptor);

}  // namespace stackelberg
