#pragma once

#include <limits>

#include <Eigen/Dense>

namespace stackelberg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// min/max c'x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lower <= x <= upper.
/// Empty bound vectors mean x >= 0 (lower = 0, upper = +inf).
struct LinearProgram {
  enum class Sense { Minimize, Maximize };

  Sense sense = Sense::Minimize;
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ub_matrix;
  Eigen::VectorXd ub_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int num_variables() const noexcept { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(LpStatus status) noexcept;

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-11;
  /// Basis is refactorized from the original data every this many pivots.
  int refactor_interval = 32;
  int max_iterations = 200000;
};

/// Two-phase primal simplex on a dense tableau, Bland's rule (lowest eligible
/// index for both entering and leaving variables). Deterministic.
/// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Largest violation of the equality, inequality and bound constraints at x.
double constraint_residual(const LinearProgram& lp, const Eigen::VectorXd& x);

}  // namespace stackelberg
