#include "stackelberg/instances.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace stackelberg {

BanditGame table2_game(NoiseModel noise) {
  Table mu1(2, 2), mu2(2, 2);
  mu1 << 2.0, 4.0, 1.0, 3.0;
  mu2 << 1.0, 0.0, 0.0, 1.0;
  return BanditGame(mu1, mu2, noise);
}

GamePair lower_bound_pair(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("lower_bound_pair needs n >= 1");
  const double delta = 1.0 / std::sqrt(13.5 * static_cast<double>(n));
  if (delta > 0.5) throw std::invalid_argument("delta parameter exceeds 1/2");
  Table mu1(2, 2), pos(2, 2), neg(2, 2);
  mu1 << 1.0, 0.0, 0.5, 0.5;
  pos << (1.0 + delta) / 2.0, (1.0 - delta) / 2.0, 1.0, 1.0;
  neg << (1.0 - delta) / 2.0, (1.0 + delta) / 2.0, 1.0, 1.0;
  return {BanditGame(mu1, pos, NoiseModel::bernoulli()), BanditGame(mu1, neg, NoiseModel::bernoulli()), delta};
}

BanditGame gap_instance(double eps1, double eps2, NoiseModel noise) {
  if (!(eps1 >= 0.0 && eps1 < eps2 && eps2 < 1.0)) {
    throw std::invalid_argument("gap_instance needs 0 <= eps1 < eps2 < 1");
  }
  Table mu1(2, 2), mu2(2, 2);
  mu1 << 1.0, 0.0, 0.5, 0.5;
  mu2 << (eps1 + eps2) / 2.0, 0.0, 1.0, 1.0;
  return BanditGame(mu1, mu2, noise);
}

BanditGame lower_bound_family(int num_leader, int num_follower, double eps, double g, int a_star, int b1_star,
                              int b2_star, NoiseModel noise) {
  if (num_leader < 1) throw std::invalid_argument("need at least one leader action");
  if (num_follower < 3 || num_follower % 3 != 0) throw std::invalid_argument("B must be a positive multiple of 3");
  if (!(eps > 0.0 && eps < 1.0 / (4.0 * std::sqrt(2.0)))) throw std::invalid_argument("eps out of range");
  if (!(g >= 0.0 && g <= 0.25)) throw std::invalid_argument("g out of range");
  const int third = num_follower / 3;
  if (a_star < 0 || a_star >= num_leader) throw std::invalid_argument("a_star out of range");
  if (b1_star < 0 || b1_star >= third) throw std::invalid_argument("b1_star must lie in the first third");
  if (b2_star < third || b2_star >= 2 * third) throw std::invalid_argument("b2_star must lie in the second third");
  Table mu1(num_leader, num_follower), mu2 = Table::Constant(num_leader, num_follower, 0.5);
  for (int b = 0; b < num_follower; ++b) {
    const double v = b < third ? 0.5 + g + eps : (b < 2 * third ? 0.5 + eps : 0.5);
    mu1.col(b).setConstant(v);
  }
  mu2(a_star, b1_star) = 0.5 + 2.0 * eps;
  mu2(a_star, b2_star) = 0.5 + 1.25 * eps;
  return BanditGame(mu1, mu2, noise);
}

BanditGame random_game(int num_leader, int num_follower, GameStructure structure, Rng& rng, NoiseModel noise) {
  if (num_leader < 1 || num_follower < 1) throw std::invalid_argument("sizes must be positive");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Table mu1(num_leader, num_follower), mu2(num_leader, num_follower);
  for (int a = 0; a < num_leader; ++a) {
    for (int b = 0; b < num_follower; ++b) {
      mu2(a, b) = u(rng);
      switch (structure) {
        case GameStructure::General: mu1(a, b) = u(rng); break;
        case GameStructure::ZeroSum: mu1(a, b) = 1.0 - mu2(a, b); break;
        case GameStructure::Cooperative: mu1(a, b) = mu2(a, b); break;
      }
    }
  }
  return BanditGame(mu1, mu2, noise);
}

EpisodicMDP random_mdp(int horizon, int num_states, int num_actions, Rng& rng, NoiseModel noise) {
  if (horizon < 1 || num_states < 1 || num_actions < 1) throw std::invalid_argument("sizes must be positive");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  const std::size_t rows = static_cast<std::size_t>(horizon - 1) * num_states * num_actions;
  std::vector<double> P(rows * num_states);
  for (std::size_t r = 0; r < rows; ++r) {
    double total = 0.0;
    for (int t = 0; t < num_states; ++t) total += P[r * num_states + t] = e(rng);
    for (int t = 0; t < num_states; ++t) P[r * num_states + t] /= total;
  }
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states * num_actions;
  std::vector<double> r1(cells), r2(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    r1[c] = u(rng);
    r2[c] = u(rng);
  }
  return EpisodicMDP(horizon, num_states, num_actions, std::move(P), std::move(r1), std::move(r2), 0, noise);
}

BanditRLGame random_bandit_rl_game(int num_arms, int horizon, int num_states, int num_actions, Rng& rng,
                                   NoiseModel noise) {
  if (num_arms < 1) throw std::invalid_argument("need at least one arm");
  std::vector<EpisodicMDP> arms;
  for (int a = 0; a < num_arms; ++a) arms.push_back(random_mdp(horizon, num_states, num_actions, rng, noise));
  return BanditRLGame(std::move(arms));
}

namespace {

Eigen::VectorXd unit_vector(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

LinearGame random_linear_game(int num_leader, int num_follower, int dimension, Rng& rng, double sigma) {
  if (num_leader < 1 || num_follower < 1 || dimension < 1) throw std::invalid_argument("sizes must be positive");
  FeatureTable phi(static_cast<Eigen::Index>(num_leader) * num_follower, dimension);
  for (Eigen::Index i = 0; i < phi.rows(); ++i) phi.row(i) = unit_vector(dimension, rng).transpose();
  Eigen::VectorXd t1 = unit_vector(dimension, rng);
  Eigen::VectorXd t2 = unit_vector(dimension, rng);
  return LinearGame(num_leader, num_follower, std::move(phi), std::move(t1), std::move(t2),
                    NoiseModel::gaussian(sigma));
}

LinearGame one_hot_linear_embedding(const BanditGame& game) {
  const int A = game.num_leader_actions(), B = game.num_follower_actions();
  const Eigen::Index d = static_cast<Eigen::Index>(A) * B;
  Eigen::VectorXd t1(d), t2(d);
  for (int a = 0; a < A; ++a) {
    for (int b = 0; b < B; ++b) {
      t1[static_cast<Eigen::Index>(a) * B + b] = game.mean_leader()(a, b);
      t2[static_cast<Eigen::Index>(a) * B + b] = game.mean_follower()(a, b);
    }
  }
  return LinearGame(A, B, Eigen::MatrixXd::Identity(d, d), std::move(t1), std::move(t2), game.noise());
}

BanditRLGame embed_as_bandit_rl(const BanditGame& game) {
  const int A = game.num_leader_actions(), B = game.num_follower_actions();
  std::vector<EpisodicMDP> arms;
  for (int a = 0; a < A; ++a) {
    std::vector<double> r1(B), r2(B);
    for (int b = 0; b < B; ++b) {
      r1[b] = game.mean_leader()(a, b);
      r2[b] = game.mean_follower()(a, b);
    }
    arms.emplace_back(1, 1, B, std::vector<double>{}, std::move(r1), std::move(r2), 0, game.noise());
  }
  return BanditRLGame(std::move(arms));
}

const char* to_string(InstanceFamily family) noexcept {
  switch (family) {
    case InstanceFamily::LowerBoundPair: return "lower-bound-pair";
    case InstanceFamily::GapInstance: return "gap-instance";
    case InstanceFamily::LowerBoundFamily: return "lower-bound-family";
    case InstanceFamily::Table2: return "table2";
    case InstanceFamily::RandomGeneral: return "random-general";
    case InstanceFamily::RandomZeroSum: return "random-zero-sum";
    case InstanceFamily::RandomCooperative: return "random-cooperative";
  }
  return "unknown";
}

InstanceFamily parse_instance_family(const std::string& name) {
  for (InstanceFamily f : {InstanceFamily::LowerBoundPair, InstanceFamily::GapInstance,
                           InstanceFamily::LowerBoundFamily, InstanceFamily::Table2, InstanceFamily::RandomGeneral,
                           InstanceFamily::RandomZeroSum, InstanceFamily::RandomCooperative}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown instance family '" + name + "'");
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, double>& params) : params_(params) {}

  double get(const std::string& key) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) throw std::invalid_argument("missing instance parameter '" + key + "'");
    return it->second;
  }
  double get_or(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }
  int get_int(const std::string& key) {
    const double v = get(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  void finish() const {
    for (const auto& [k, v] : params_) {
      if (!used_.count(k)) throw std::invalid_argument("unknown instance parameter '" + k + "'");
    }
  }

 private:
  const std::map<std::string, double>& params_;
  std::set<std::string> used_;
};

}  // namespace

BanditGame make_game(const InstanceDescriptor& d) {
  ParamReader p(d.params);
  auto build = [&]() -> BanditGame {
    switch (d.family) {
      case InstanceFamily::LowerBoundPair: {
        const double n = p.get("n");
        const double sign = p.get_or("sign", 1.0);
        if (n != std::floor(n)) throw std::invalid_argument("n must be an integer");
        if (sign != 1.0 && sign != -1.0) throw std::invalid_argument("sign must be +1 or -1");
        GamePair pair = lower_bound_pair(static_cast<std::int64_t>(n));
        return sign > 0 ? pair.positive : pair.negative;
      }
      case InstanceFamily::GapInstance: {
        const double e1 = p.get("eps1"), e2 = p.get("eps2");
        return gap_instance(e1, e2, d.noise.value_or(NoiseModel::deterministic()));
      }
      case InstanceFamily::LowerBoundFamily: {
        const int A = p.get_int("A"), B = p.get_int("B");
        const double eps = p.get("eps"), g = p.get("g");
        const int a = p.get_int("a_star"), b1 = p.get_int("b1_star"), b2 = p.get_int("b2_star");
        return lower_bound_family(A, B, eps, g, a, b1, b2, d.noise.value_or(NoiseModel::bernoulli()));
      }
      case InstanceFamily::Table2:
        return table2_game(d.noise.value_or(NoiseModel::deterministic()));
      case InstanceFamily::RandomGeneral:
      case InstanceFamily::RandomZeroSum:
      case InstanceFamily::RandomCooperative: {
        const int A = p.get_int("A"), B = p.get_int("B");
        const GameStructure s = d.family == InstanceFamily::RandomGeneral ? GameStructure::General
                                : d.family == InstanceFamily::RandomZeroSum ? GameStructure::ZeroSum
                                                                            : GameStructure::Cooperative;
        Rng rng(d.seed);
        return random_game(A, B, s, rng, d.noise.value_or(NoiseModel::bernoulli()));
      }
    }
    throw std::invalid_argument("unhandled instance family");
  };
  BanditGame game = build();
  p.finish();
  if (d.noise && d.family == InstanceFamily::LowerBoundPair) {
    return BanditGame(game.mean_leader(), game.mean_follower(), *d.noise);
  }
  return game;
}

}  // namespace stackelberg
