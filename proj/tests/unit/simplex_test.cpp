#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stackelberg/simplex.hpp"

namespace sl = stackelberg;
using Sense = sl::LinearProgram::Sense;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Stacks ub rows, -eq / +eq pairs, and the bound rows into A x <= b form.
void to_inequalities(const sl::LinearProgram& lp, Eigen::MatrixXd& rows, Eigen::VectorXd& rhs) {
  const int n = lp.num_variables();
  std::vector<Eigen::VectorXd> r;
  std::vector<double> b;
  for (Eigen::Index i = 0; i < lp.ub_matrix.rows(); ++i) {
    r.push_back(lp.ub_matrix.row(i).transpose());
    b.push_back(lp.ub_rhs[i]);
  }
  for (Eigen::Index i = 0; i < lp.eq_matrix.rows(); ++i) {
    r.push_back(lp.eq_matrix.row(i).transpose());
    b.push_back(lp.eq_rhs[i]);
    r.push_back(-lp.eq_matrix.row(i).transpose());
    b.push_back(-lp.eq_rhs[i]);
  }
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : sl::kInfinity;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    if (std::isfinite(lo)) {
      r.push_back(-e);
      b.push_back(-lo);
    }
    if (std::isfinite(hi)) {
      r.push_back(e);
      b.push_back(hi);
    }
  }
  rows.resize(static_cast<Eigen::Index>(r.size()), n);
  rhs.resize(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = r[i].transpose();
    rhs[static_cast<Eigen::Index>(i)] = b[i];
  }
}

double oracle_value(const sl::LinearProgram& lp, bool& feasible) {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  to_inequalities(lp, rows, rhs);
  const double sign = lp.sense == Sense::Maximize ? 1.0 : -1.0;
  const auto r = oracle::vertex_max(sign * lp.objective, rows, rhs);
  feasible = r.has_value();
  return r ? sign * r->value : 0.0;
}

}  // namespace

TEST(Simplex, MaximizeSingleVariable) {
  sl::LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = vec({1.0});
  lp.ub_matrix = Eigen::MatrixXd::Ones(1, 1);
  lp.ub_rhs = vec({1.0});
  const auto s = sl::solve_lp(lp);
  ASSERT_EQ(s.status, sl::LpStatus::Optimal);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
}

TEST(Simplex, ContradictoryBoundsInfeasible) {
  sl::LinearProgram lp;
  lp.objective = vec({0.0});
  lp.lower = vec({1.0});
  lp.upper = vec({0.0});
  EXPECT_EQ(sl::solve_lp(lp).status, sl::LpStatus::Infeasible);
  sl::LinearProgram rows;
  rows.objective = vec({0.0});
  rows.ub_matrix = (Eigen::MatrixXd(2, 1) << -1.0, 1.0).finished();
  rows.ub_rhs = vec({-1.0, 0.0});
  EXPECT_EQ(sl::solve_lp(rows).status, sl::LpStatus::Infeasible);
}

TEST(Simplex, Unbounded) {
  sl::LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = vec({1.0, 1.0});
  lp.ub_matrix = (Eigen::MatrixXd(1, 2) << 1.0, -1.0).finished();
  lp.ub_rhs = vec({1.0});
  EXPECT_EQ(sl::solve_lp(lp).status, sl::LpStatus::Unbounded);
}

TEST(Simplex, FreeAndUpperOnlyVariables) {
  // min x + 2y, x free, y <= 3 without a lower bound, x - y >= -1, x + y >= 2, x <= 1
  sl::LinearProgram lp;
  lp.objective = vec({1.0, 2.0});
  lp.ub_matrix = (Eigen::MatrixXd(3, 2) << -1.0, 1.0, -1.0, -1.0, 1.0, 0.0).finished();
  lp.ub_rhs = vec({1.0, -2.0, 1.0});
  lp.lower = vec({-sl::kInfinity, -sl::kInfinity});
  lp.upper = vec({sl::kInfinity, 3.0});
  const auto s = sl::solve_lp(lp);
  ASSERT_EQ(s.status, sl::LpStatus::Optimal);
  EXPECT_NEAR(s.value, 3.0, 1e-9);
  EXPECT_NEAR(s.x[0], 1.0, 1e-9);
  EXPECT_NEAR(s.x[1], 1.0, 1e-9);
  EXPECT_LE(sl::constraint_residual(lp, s.x), 1e-9);
  lp.ub_matrix.conservativeResize(2, 2);
  lp.ub_rhs.conservativeResize(2);
  EXPECT_EQ(sl::solve_lp(lp).status, sl::LpStatus::Unbounded);
}

TEST(Simplex, FixedVariablesAndEqualities) {
  sl::LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = vec({1.0, 1.0, 1.0});
  lp.eq_matrix = (Eigen::MatrixXd(1, 3) << 1.0, 2.0, 1.0).finished();
  lp.eq_rhs = vec({4.0});
  lp.lower = vec({0.0, 0.5, 0.0});
  lp.upper = vec({1.0, 0.5, sl::kInfinity});
  const auto s = sl::solve_lp(lp);
  ASSERT_EQ(s.status, sl::LpStatus::Optimal);
  EXPECT_NEAR(s.value, 3.5, 1e-12);
  EXPECT_NEAR(s.x[1], 0.5, 0.0);
}

TEST(Simplex, RedundantEqualityRows) {
  sl::LinearProgram lp;
  lp.objective = vec({1.0, 3.0});
  lp.eq_matrix = (Eigen::MatrixXd(3, 2) << 1.0, 1.0, 2.0, 2.0, 1.0, 1.0).finished();
  lp.eq_rhs = vec({1.0, 2.0, 1.0});
  const auto s = sl::solve_lp(lp);
  ASSERT_EQ(s.status, sl::LpStatus::Optimal);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
}

// Beale's example cycles under the textbook largest-coefficient rule.
TEST(Simplex, DegenerateCyclingExampleTerminates) {
  sl::LinearProgram lp;
  lp.objective = vec({-0.75, 150.0, -0.02, 6.0});
  lp.ub_matrix = (Eigen::MatrixXd(3, 4) << 0.25, -60.0, -0.04, 9.0, 0.5, -90.0, -0.02, 3.0, 0.0, 0.0, 1.0, 0.0)
                     .finished();
  lp.ub_rhs = vec({0.0, 0.0, 1.0});
  const auto s = sl::solve_lp(lp);
  ASSERT_EQ(s.status, sl::LpStatus::Optimal);
  EXPECT_NEAR(s.value, -0.05, 1e-12);
}

TEST(Simplex, RejectsMalformedPrograms) {
  sl::LinearProgram lp;
  lp.objective = vec({1.0, 1.0});
  lp.ub_matrix = Eigen::MatrixXd::Ones(1, 3);
  lp.ub_rhs = vec({1.0});
  EXPECT_THROW(sl::solve_lp(lp), std::invalid_argument);
  sl::LinearProgram nan;
  nan.objective = vec({std::nan("")});
  EXPECT_THROW(sl::solve_lp(nan), std::invalid_argument);
}

TEST(Simplex, RandomProgramsMatchVertexEnumeration) {
  sl::Rng rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0), c(-1.0, 1.0);
  int optimal = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10, m = 4;
    sl::LinearProgram lp;
    lp.sense = trial % 2 ? Sense::Maximize : Sense::Minimize;
    lp.objective.resize(n);
    for (int j = 0; j < n; ++j) lp.objective[j] = c(rng);
    lp.ub_matrix.resize(m + 1, n);
    lp.ub_rhs.resize(m + 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) lp.ub_matrix(i, j) = c(rng);
      lp.ub_rhs[i] = u(rng);
    }
    lp.ub_matrix.row(m).setOnes();
    lp.ub_rhs[m] = 2.0 + u(rng);
    bool feasible = false;
    const double ref = oracle_value(lp, feasible);
    ASSERT_TRUE(feasible);
    const auto s = sl::solve_lp(lp);
    ASSERT_EQ(s.status, sl::LpStatus::Optimal);
    EXPECT_NEAR(s.value, ref, 1e-7);
    EXPECT_NEAR(s.value, lp.objective.dot(s.x), 1e-12);
    EXPECT_LE(sl::constraint_residual(lp, s.x), 1e-8);
    ++optimal;
  }
  EXPECT_EQ(optimal, 40);
}

TEST(Simplex, RandomBoxedProgramsWithEqualitiesMatchVertexEnumeration) {
  sl::Rng rng(321);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5;
    sl::LinearProgram lp;
    lp.sense = trial % 2 ? Sense::Maximize : Sense::Minimize;
    lp.objective.resize(n);
    for (int j = 0; j < n; ++j) lp.objective[j] = c(rng);
    lp.lower = Eigen::VectorXd::Constant(n, -1.0);
    lp.upper = Eigen::VectorXd::Constant(n, 2.0);
    if (trial % 3 == 0) lp.upper[0] = lp.lower[0] = 0.25;
    lp.eq_matrix.resize(1, n);
    for (int j = 0; j < n; ++j) lp.eq_matrix(0, j) = c(rng);
    // right-hand side from a feasible interior point keeps the program feasible
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.25);
    lp.eq_rhs = lp.eq_matrix * x0;
    lp.ub_matrix.resize(2, n);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < n; ++j) lp.ub_matrix(i, j) = c(rng);
    }
    lp.ub_rhs = lp.ub_matrix * x0 + Eigen::VectorXd::Constant(2, 0.3);
    bool feasible = false;
    const double ref = oracle_value(lp, feasible);
    ASSERT_TRUE(feasible);
    const auto s = sl::solve_lp(lp);
    ASSERT_EQ(s.status, sl::LpStatus::Optimal) << "trial " << trial;
    EXPECT_NEAR(s.value, ref, 1e-7) << "trial " << trial;
    EXPECT_LE(sl::constraint_residual(lp, s.x), 1e-8);
  }
}

TEST(Simplex, BitwiseDeterministic) {
  sl::Rng rng(5);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  sl::LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective.resize(8);
  for (int j = 0; j < 8; ++j) lp.objective[j] = c(rng);
  lp.ub_matrix = Eigen::MatrixXd::Ones(1, 8);
  lp.ub_rhs = vec({1.0});
  lp.eq_matrix.resize(1, 8);
  for (int j = 0; j < 8; ++j) lp.eq_matrix(0, j) = c(rng);
  lp.eq_rhs = vec({0.0});
  const auto a = sl::solve_lp(lp);
  const auto b = sl::solve_lp(lp);
  ASSERT_EQ(a.status, b.status);
  EXPECT_EQ(a.value, b.value);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}
