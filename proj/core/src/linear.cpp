#include "stackelberg/linear.hpp"

#include <cmath>
#include <stdexcept>

namespace stackelberg {

LinearGame::LinearGame(int num_leader, int num_follower, FeatureTable features, Eigen::VectorXd theta_leader,
                       Eigen::VectorXd theta_follower, NoiseModel noise)
    : num_leader_(num_leader),
      num_follower_(num_follower),
      features_(std::move(features)),
      theta_leader_(std::move(theta_leader)),
      theta_follower_(std::move(theta_follower)),
      noise_(noise) {
  if (num_leader_ < 1 || num_follower_ < 1) throw std::invalid_argument("action counts must be positive");
  if (features_.rows() != static_cast<Eigen::Index>(num_leader_) * num_follower_) {
    throw std::invalid_argument("feature table needs A*B rows");
  }
  if (features_.cols() < 1) throw std::invalid_argument("feature dimension must be positive");
  if (theta_leader_.size() != features_.cols() || theta_follower_.size() != features_.cols()) {
    throw std::invalid_argument("parameter vectors must match the feature dimension");
  }
  if (!features_.allFinite() || !theta_leader_.allFinite() || !theta_follower_.allFinite()) {
    throw std::invalid_argument("features and parameters must be finite");
  }
  to_bandit_game();  // validates means against the noise model
}

namespace {

Table reshape(const Eigen::VectorXd& flat, int rows, int cols) {
  Table t(rows, cols);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) t(a, b) = flat[static_cast<Eigen::Index>(a) * cols + b];
  }
  return t;
}

}  // namespace

Table LinearGame::mean_leader() const {
  return reshape(features_ * theta_leader_, num_leader_, num_follower_);
}

Table LinearGame::mean_follower() const {
  return reshape(features_ * theta_follower_, num_leader_, num_follower_);
}

BanditGame LinearGame::to_bandit_game() const { return BanditGame(mean_leader(), mean_follower(), noise_); }

namespace {

struct Span {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd coords;  // n x r
  int rank = 0;
};

Span span_of(const FeatureTable& features) {
  Span sp;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(features, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[0] > 0.0)) throw std::invalid_argument("feature table is identically zero");
  const double tol = 1e-10 * sv[0] * static_cast<double>(std::max(features.rows(), features.cols()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol) ++sp.rank;
  }
  const Eigen::Index d = features.cols();
  if (sp.rank == d) {
    sp.basis = Eigen::MatrixXd::Identity(d, d);
    sp.coords = features;
  } else {
    sp.basis = svd.matrixV().leftCols(sp.rank);
    sp.coords = features * sp.basis;
  }
  return sp;
}

Eigen::VectorXd leverages(const Eigen::MatrixXd& coords, const Eigen::VectorXd& w) {
  const Eigen::Index r = coords.cols();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    if (w[i] > 0.0) V.noalias() += w[i] * coords.row(i).transpose() * coords.row(i);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(V);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw std::runtime_error("singular design matrix");
  const Eigen::MatrixXd solved = ldlt.solve(coords.transpose());  // r x n
  return (coords.transpose().cwiseProduct(solved)).colwise().sum().transpose();
}

}  // namespace

CoreSet core_set(const FeatureTable& features, double leverage_factor, int max_iterations) {
  if (features.rows() == 0 || features.cols() == 0) throw std::invalid_argument("empty feature table");
  if (!features.allFinite()) throw std::invalid_argument("features must be finite");
  if (!(leverage_factor >= 1.0)) throw std::invalid_argument("leverage factor must be at least 1");
  const Span sp = span_of(features);
  const Eigen::Index n = sp.coords.rows();
  const int r = sp.rank;

  // Greedy volumetric start: repeatedly take the row with the largest residual.
  Eigen::MatrixXd residual = sp.coords;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < r; ++k) {
    Eigen::Index pick = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double norm = residual.row(i).squaredNorm();
      if (norm > best) {
        best = norm;
        pick = i;
      }
    }
    const Eigen::RowVectorXd u = residual.row(pick) / std::sqrt(best);
    residual -= (residual * u.transpose()) * u;
    residual.row(pick).setZero();
    w[pick] = 1.0 / r;
  }

  CoreSet out;
  const double target = leverage_factor * r;
  for (;;) {
    const Eigen::VectorXd g = leverages(sp.coords, w);
    Eigen::Index j = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (g[i] > g[j]) j = i;
    }
    if (g[j] <= target) break;
    if (out.iterations >= max_iterations) throw std::runtime_error("core set did not reach the leverage bound");
    ++out.iterations;
    Eigen::Index k = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w[i] > 0.0 && (k < 0 || g[i] < g[k])) k = i;
    }
    if (g[j] - r >= r - g[k]) {
      const double lambda = (g[j] - r) / (r * (g[j] - 1.0));
      w *= 1.0 - lambda;
      w[j] += lambda;
    } else {
      const double drop = w[k] / (1.0 - w[k]);
      const double lambda = g[k] < 1.0 ? drop : std::min(drop, (r - g[k]) / (r * (g[k] - 1.0)));
      w *= 1.0 + lambda;
      w[k] = lambda == drop ? 0.0 : w[k] - lambda;
    }
  }

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w[i] > 0.0) {
      out.members.push_back(static_cast<int>(i));
      total += w[i];
    }
  }
  out.weights.resize(static_cast<Eigen::Index>(out.members.size()));
  for (std::size_t m = 0; m < out.members.size(); ++m) out.weights[static_cast<Eigen::Index>(m)] = w[out.members[m]] / total;
  out.basis = sp.basis;
  out.rank = r;
  out.max_leverage = max_leverage(features, out);
  if (out.max_leverage > target * (1.0 + 1e-9)) throw std::runtime_error("core set failed the leverage post-check");
  return out;
}

double max_leverage(const FeatureTable& features, const CoreSet& core) {
  const Eigen::MatrixXd coords = core.rank == features.cols() ? features : Eigen::MatrixXd(features * core.basis);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(coords.rows());
  for (std::size_t m = 0; m < core.members.size(); ++m) w[core.members[m]] = core.weights[static_cast<Eigen::Index>(m)];
  return leverages(coords, w).maxCoeff();
}

Eigen::VectorXd weighted_least_squares(const FeatureTable& features, const CoreSet& core,
                                       const Eigen::VectorXd& member_means) {
  if (member_means.size() != static_cast<Eigen::Index>(core.members.size())) {
    throw std::invalid_argument("one mean per core-set member required");
  }
  const bool full = core.rank == features.cols();
  const Eigen::Index r = core.rank;
  // Rescaling the weights leaves the estimate unchanged; scaling by the largest
  // keeps uniform designs exact.
  const double wmax = core.weights.maxCoeff();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(r, r);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
  for (std::size_t m = 0; m < core.members.size(); ++m) {
    const Eigen::VectorXd psi = full ? Eigen::VectorXd(features.row(core.members[m]).transpose())
                                     : Eigen::VectorXd(core.basis.transpose() * features.row(core.members[m]).transpose());
    const double w = core.weights[static_cast<Eigen::Index>(m)] / wmax;
    V.noalias() += w * psi * psi.transpose();
    rhs.noalias() += w * member_means[static_cast<Eigen::Index>(m)] * psi;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(V);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-14) {
    throw std::runtime_error("singular design matrix");
  }
  const Eigen::VectorXd theta = ldlt.solve(rhs);
  return full ? theta : Eigen::VectorXd(core.basis * theta);
}

std::int64_t linear_sample_budget(int dimension, double eps, double delta, double hoeffding_constant) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(hoeffding_constant > 0.0)) throw std::invalid_argument("hoeffding constant must be positive");
  const double n = std::ceil(hoeffding_constant * dimension * std::log(4.0 * dimension / delta) / (eps * eps));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

LinearLearnResult learn_linear(RewardOracle& oracle, const FeatureTable& features, const LinearLearnConfig& config) {
  const int A = oracle.num_leader_actions(), B = oracle.num_follower_actions();
  if (features.rows() != static_cast<Eigen::Index>(A) * B) {
    throw std::invalid_argument("feature table does not match the oracle's action grid");
  }
  LinearLearnResult out;
  out.core = core_set(features);
  out.samples_per_member = config.samples_per_member > 0
                               ? config.samples_per_member
                               : linear_sample_budget(out.core.rank, config.epsilon, config.delta,
                                                      config.hoeffding_constant);
  const std::int64_t before = oracle.queries_made();
  const Eigen::Index k = static_cast<Eigen::Index>(out.core.members.size());
  Eigen::VectorXd m1(k), m2(k);
  for (Eigen::Index m = 0; m < k; ++m) {
    const int row = out.core.members[static_cast<std::size_t>(m)];
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t j = 0; j < out.samples_per_member; ++j) {
      const RewardSample r = oracle.query(row / B, row % B);
      s1 += r.leader;
      s2 += r.follower;
    }
    m1[m] = s1 / static_cast<double>(out.samples_per_member);
    m2[m] = s2 / static_cast<double>(out.samples_per_member);
  }
  out.total_queries = oracle.queries_made() - before;
  out.theta_leader_hat = weighted_least_squares(features, out.core, m1);
  out.theta_follower_hat = weighted_least_squares(features, out.core, m2);
  const BanditLearnResult sel = select_from_estimates(reshape(features * out.theta_leader_hat, A, B),
                                                      reshape(features * out.theta_follower_hat, A, B),
                                                      config.epsilon, config.tie);
  out.leader_action = sel.leader_action;
  out.follower_action = sel.follower_action;
  out.mean_leader_hat = sel.mean_leader_hat;
  out.mean_follower_hat = sel.mean_follower_hat;
  out.values = sel.values;
  return out;
}

}  // namespace stackelberg
