#include "stackelberg/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stackelberg {

namespace {

void check_leader_index(int a, int num_leader) {
  if (a < 0 || a >= num_leader) {
    throw std::out_of_range("leader action " + std::to_string(a) + " out of range [0, " +
                            std::to_string(num_leader) + ")");
  }
}

void check_follower_index(int b, int num_follower) {
  if (b < 0 || b >= num_follower) {
    throw std::out_of_range("follower action " + std::to_string(b) + " out of range [0, " +
                            std::to_string(num_follower) + ")");
  }
}

}  // namespace

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("gaussian noise needs a finite nonnegative sigma");
  }
  return NoiseModel{Kind::Gaussian, sigma};
}

bool NoiseModel::admits_mean(double mean) const noexcept {
  if (!std::isfinite(mean)) return false;
  if (kind_ == Kind::Bernoulli) return mean >= 0.0 && mean <= 1.0;
  return true;
}

double NoiseModel::sample(double mean, Rng& rng) const {
  if (!admits_mean(mean)) {
    throw std::domain_error("mean " + std::to_string(mean) + " is not admissible for this noise model");
  }
  switch (kind_) {
    case Kind::Deterministic:
      return mean;
    case Kind::Bernoulli:
      return std::bernoulli_distribution{mean}(rng) ? 1.0 : 0.0;
    case Kind::Gaussian:
      if (sigma_ == 0.0) return mean;
      return mean + sigma_ * std::normal_distribution<double>{0.0, 1.0}(rng);
  }
  return mean;
}

BanditGame::BanditGame(Table mean_leader, Table mean_follower, NoiseModel noise)
    : mean_leader_(std::move(mean_leader)),
      mean_follower_(std::move(mean_follower)),
      noise_(noise) {
  if (mean_leader_.rows() < 1 || mean_leader_.cols() < 1) {
    throw std::invalid_argument("a bandit game needs at least one action per player");
  }
  if (mean_leader_.rows() != mean_follower_.rows() || mean_leader_.cols() != mean_follower_.cols()) {
    throw std::invalid_argument("leader and follower mean tables differ in shape");
  }
  for (Eigen::Index a = 0; a < mean_leader_.rows(); ++a) {
    for (Eigen::Index b = 0; b < mean_leader_.cols(); ++b) {
      if (!std::isfinite(mean_leader_(a, b)) || !std::isfinite(mean_follower_(a, b))) {
        throw std::invalid_argument("mean tables must be finite");
      }
      if (!noise_.admits_mean(mean_leader_(a, b)) || !noise_.admits_mean(mean_follower_(a, b))) {
        throw std::invalid_argument("bernoulli noise requires all means in [0, 1]");
      }
    }
  }
}

RewardSample sample_rewards(const BanditGame& game, int a, int b, Rng& rng) {
  check_leader_index(a, game.num_leader_actions());
  check_follower_index(b, game.num_follower_actions());
  RewardSample out;
  out.leader = game.noise().sample(game.mean_leader()(a, b), rng);
  out.follower = game.noise().sample(game.mean_follower()(a, b), rng);
  return out;
}

BestResponseSet best_response_set(const Table& mean_follower, int a, double eps, double tolerance) {
  check_leader_index(a, static_cast<int>(mean_follower.rows()));
  if (!(eps >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  const double best = mean_follower.row(a).maxCoeff();
  BestResponseSet out{a, eps, {}};
  for (Eigen::Index b = 0; b < mean_follower.cols(); ++b) {
    if (mean_follower(a, b) >= best - eps - tolerance) out.members.push_back(static_cast<int>(b));
  }
  return out;
}

ResponseChoice tie_broken_response(const Table& mean_leader, const Table& mean_follower, int a,
                                   double eps, TieBreaking tie, double tolerance) {
  const BestResponseSet br = best_response_set(mean_follower, a, eps, tolerance);
  ResponseChoice choice{br.members.front(), mean_leader(a, br.members.front())};
  for (int b : br.members) {
    const double v = mean_leader(a, b);
    const bool better = tie == TieBreaking::Pessimistic ? v < choice.value : v > choice.value;
    if (better) choice = {b, v};
  }
  return choice;
}

double phi_value(const BanditGame& game, int a, double eps, TieBreaking tie) {
  return tie_broken_response(game.mean_leader(), game.mean_follower(), a, eps, tie).value;
}

StackelbergPoint stackelberg(const BanditGame& game, double eps, TieBreaking tie) {
  StackelbergPoint best{0, phi_value(game, 0, eps, tie)};
  for (int a = 1; a < game.num_leader_actions(); ++a) {
    const double v = phi_value(game, a, eps, tie);
    if (v > best.value) best = {a, v};
  }
  return best;
}

double gap(const BanditGame& game, double eps) {
  return stackelberg(game, 0.0, TieBreaking::Pessimistic).value -
         stackelberg(game, eps, TieBreaking::Pessimistic).value;
}

double optimistic_gap(const BanditGame& game, double eps) {
  const double best_psi0 = stackelberg(game, 0.0, TieBreaking::Optimistic).value;
  double out = 0.0;
  for (int a = 0; a < game.num_leader_actions(); ++a) {
    const double psi_eps = phi_value(game, a, eps, TieBreaking::Optimistic);
    if (psi_eps >= best_psi0 - eps - kExactTolerance) {
      out = std::max(out, psi_eps - phi_value(game, a, 0.0, TieBreaking::Optimistic));
    }
  }
  return out;
}

GameSampler::GameSampler(BanditGame game, std::uint64_t seed) : game_(std::move(game)) {
  const int na = game_.num_leader_actions();
  const int nb = game_.num_follower_actions();
  streams_.reserve(static_cast<std::size_t>(na) * nb);
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      streams_.emplace_back(derive_seed(seed, {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)}));
    }
  }
}

RewardSample GameSampler::query(int a, int b) {
  check_leader_index(a, game_.num_leader_actions());
  check_follower_index(b, game_.num_follower_actions());
  count_query();
  return sample_rewards(game_, a, b, streams_[static_cast<std::size_t>(a) * game_.num_follower_actions() + b]);
}

}  // namespace stackelberg
