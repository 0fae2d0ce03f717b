#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "stackelberg/instances.hpp"
#include "stackelberg/linear.hpp"

namespace sl = stackelberg;
using sl::TieBreaking;

namespace {

Eigen::MatrixXd random_features(int n, int d, sl::Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd f(n, d);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = g(rng);
  return f;
}

double leverage_brute(const Eigen::MatrixXd& coords, const std::vector<int>& members, const Eigen::VectorXd& w) {
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(coords.cols(), coords.cols());
  for (std::size_t j = 0; j < members.size(); ++j) {
    const Eigen::VectorXd x = coords.row(members[j]).transpose();
    V += w[static_cast<Eigen::Index>(j)] * x * x.transpose();
  }
  const Eigen::MatrixXd Vi = V.inverse();
  double best = 0.0;
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    const Eigen::VectorXd x = coords.row(i).transpose();
    best = std::max(best, x.dot(Vi * x));
  }
  return best;
}

}  // namespace

TEST(LinearGame, Validation) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Ones(4, 2);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(2);
  EXPECT_NO_THROW(sl::LinearGame(2, 2, f, t, t, sl::NoiseModel::gaussian(1.0)));
  EXPECT_THROW(sl::LinearGame(2, 3, f, t, t, sl::NoiseModel::gaussian(1.0)), std::invalid_argument);
  EXPECT_THROW(sl::LinearGame(2, 2, f, Eigen::VectorXd::Zero(3), t, sl::NoiseModel::gaussian(1.0)),
               std::invalid_argument);
  f(0, 0) = std::nan("");
  EXPECT_THROW(sl::LinearGame(2, 2, f, t, t, sl::NoiseModel::gaussian(1.0)), std::invalid_argument);
}

TEST(LinearGame, MeansAreInnerProducts) {
  sl::Rng rng(2);
  const auto g = sl::random_linear_game(3, 4, 5, rng);
  const auto mu1 = g.mean_leader();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_DOUBLE_EQ(mu1(a, b), g.features().row(a * 4 + b).dot(g.theta_leader()));
  EXPECT_NEAR(g.theta_follower().norm(), 1.0, 1e-12);
}

TEST(CoreSet, LeverageBoundOnRandomTables) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    sl::Rng rng(seed);
    const int d = 2 + static_cast<int>(seed % 7);
    const int n = 20 + static_cast<int>(seed * 31 % 400);
    const auto f = random_features(n, d, rng);
    const auto k = sl::core_set(f);
    EXPECT_EQ(k.rank, d);
    EXPECT_TRUE(std::is_sorted(k.members.begin(), k.members.end()));
    EXPECT_EQ(std::adjacent_find(k.members.begin(), k.members.end()), k.members.end());
    EXPECT_NEAR(k.weights.sum(), 1.0, 1e-12);
    EXPECT_GT(k.weights.minCoeff(), 0.0);
    const double lev = leverage_brute(f, k.members, k.weights);
    EXPECT_LE(lev, 2.0 * d * (1.0 + 1e-8));
    EXPECT_NEAR(lev, sl::max_leverage(f, k), 1e-8 * lev);
    EXPECT_LE(static_cast<double>(k.members.size()), 4.0 * d * std::log(std::log(d)) + 16.0);
  }
}

TEST(CoreSet, RankDeficientFeaturesUseSpan) {
  sl::Rng rng(12);
  const auto low = random_features(60, 2, rng);
  Eigen::MatrixXd lift(2, 4);
  lift << 1, 0, 2, -1, 0, 1, 1, 3;
  const Eigen::MatrixXd f = low * lift;
  const auto k = sl::core_set(f);
  EXPECT_EQ(k.rank, 2);
  EXPECT_EQ(k.basis.rows(), 4);
  EXPECT_EQ(k.basis.cols(), 2);
  EXPECT_LE(sl::max_leverage(f, k), 4.0 * (1.0 + 1e-8));
}

TEST(CoreSet, RejectsDegenerateInput) {
  EXPECT_THROW(sl::core_set(Eigen::MatrixXd(0, 3)), std::invalid_argument);
  EXPECT_THROW(sl::core_set(Eigen::MatrixXd::Zero(5, 3)), std::invalid_argument);
  EXPECT_THROW(sl::core_set(Eigen::MatrixXd::Ones(5, 3), 0.5), std::invalid_argument);
}

TEST(WeightedLeastSquares, RecoversParameterFromExactMeans) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sl::Rng rng(seed + 40);
    const auto f = random_features(50, 4, rng);
    const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(4, -1.0, 2.0);
    const auto k = sl::core_set(f);
    Eigen::VectorXd means(static_cast<Eigen::Index>(k.members.size()));
    for (std::size_t j = 0; j < k.members.size(); ++j) means[static_cast<Eigen::Index>(j)] = f.row(k.members[j]).dot(theta);
    EXPECT_LE((sl::weighted_least_squares(f, k, means) - theta).norm(), 1e-10);
  }
  EXPECT_THROW(sl::weighted_least_squares(Eigen::MatrixXd::Identity(2, 2), sl::core_set(Eigen::MatrixXd::Identity(2, 2)),
                                          Eigen::VectorXd::Zero(5)),
               std::invalid_argument);
}

TEST(LinearBudget, KnownValue) {
  EXPECT_EQ(sl::linear_sample_budget(4, 0.25, 0.1), 10394);
  EXPECT_THROW(sl::linear_sample_budget(0, 0.25, 0.1), std::invalid_argument);
}

TEST(LearnLinear, NoiselessRecoversExactSelection) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sl::Rng rng(seed + 70);
    const auto lg = sl::random_linear_game(6, 6, 3, rng);
    const sl::BanditGame g(lg.mean_leader(), lg.mean_follower(), sl::NoiseModel::deterministic());
    sl::GameSampler sampler(g, seed);
    sl::LinearLearnConfig cfg;
    cfg.epsilon = 0.2;
    cfg.samples_per_member = 3;
    const auto res = sl::learn_linear(sampler, lg.features(), cfg);
    EXPECT_EQ(res.total_queries, 3 * static_cast<std::int64_t>(res.core.members.size()));
    EXPECT_LE((res.theta_leader_hat - lg.theta_leader()).norm(), 1e-10);
    EXPECT_EQ(res.leader_action, sl::stackelberg(g, 0.15, TieBreaking::Pessimistic).leader_action);
  }
}

TEST(LearnLinear, GuaranteesUnderHalfUnitGaussianNoise) {
  const double eps = 0.25, delta = 0.1;
  const int runs = 40;
  int theorem = 0, follower = 0;
  for (int r = 0; r < runs; ++r) {
    sl::Rng rng(sl::derive_seed(404, {static_cast<std::uint64_t>(r)}));
    const auto lg = sl::random_linear_game(5, 5, 3, rng, 0.5);
    sl::GameSampler sampler(lg.to_bandit_game(), r);
    sl::LinearLearnConfig cfg;
    cfg.epsilon = eps;
    cfg.delta = delta;
    const auto res = sl::learn_linear(sampler, lg.features(), cfg);
    EXPECT_EQ(res.samples_per_member, sl::linear_sample_budget(3, eps, delta));
    EXPECT_EQ(res.total_queries, res.samples_per_member * static_cast<std::int64_t>(res.core.members.size()));
    const auto mu1 = lg.mean_leader(), mu2 = lg.mean_follower();
    theorem += oracle::phi(mu1, mu2, res.leader_action, eps / 2.0, true) >=
               oracle::max_phi(mu1, mu2, 0.0, true) - oracle::gap(mu1, mu2, eps) - eps - 1e-9;
    follower += mu2(res.leader_action, res.follower_action) >= mu2.row(res.leader_action).maxCoeff() - eps;
  }
  EXPECT_GE(theorem, static_cast<int>((1.0 - delta) * runs));
  EXPECT_GE(follower, static_cast<int>((1.0 - delta) * runs));
}

TEST(LearnLinear, OneHotEmbeddingReproducesTabularLearner) {
  sl::Rng rng(8);
  const auto g = sl::random_game(3, 3, sl::GameStructure::General, rng);
  const auto lg = sl::one_hot_linear_embedding(g);
  const auto k = sl::core_set(lg.features());
  EXPECT_EQ(k.members.size(), 9u);
  for (Eigen::Index j = 0; j < 9; ++j) EXPECT_NEAR(k.weights[j], 1.0 / 9.0, 1e-12);
  const std::int64_t n = sl::sample_budget(3, 3, 0.3, 0.1);
  sl::GameSampler s1(g, 21), s2(g, 21);
  sl::LinearLearnConfig cfg;
  cfg.epsilon = 0.3;
  cfg.samples_per_member = n;
  const auto lin = sl::learn_linear(s1, lg.features(), cfg);
  const auto tab = sl::learn_bandit_with_budget(s2, n, 0.3, TieBreaking::Pessimistic);
  EXPECT_LE((lin.mean_leader_hat - tab.mean_leader_hat).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((lin.mean_follower_hat - tab.mean_follower_hat).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(lin.leader_action, tab.leader_action);
  EXPECT_EQ(lin.follower_action, tab.follower_action);
}

TEST(LearnLinear, RejectsMismatchedFeatures) {
  const auto g = sl::table2_game();
  sl::GameSampler sampler(g, 1);
  EXPECT_THROW(sl::learn_linear(sampler, Eigen::MatrixXd::Identity(3, 3), sl::LinearLearnConfig{}),
               std::invalid_argument);
}
