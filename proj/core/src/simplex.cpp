#include "stackelberg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace stackelberg {

const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.size() == 0 || m.allFinite(); }

void validate(const LinearProgram& lp) {
  const Eigen::Index n = lp.objective.size();
  if (n == 0) throw std::invalid_argument("linear program has no variables");
  if (lp.eq_matrix.rows() != lp.eq_rhs.size() || (lp.eq_matrix.rows() > 0 && lp.eq_matrix.cols() != n)) {
    throw std::invalid_argument("equality block has inconsistent dimensions");
  }
  if (lp.ub_matrix.rows() != lp.ub_rhs.size() || (lp.ub_matrix.rows() > 0 && lp.ub_matrix.cols() != n)) {
    throw std::invalid_argument("inequality block has inconsistent dimensions");
  }
  if ((lp.lower.size() != 0 && lp.lower.size() != n) || (lp.upper.size() != 0 && lp.upper.size() != n)) {
    throw std::invalid_argument("bound vectors must be empty or have one entry per variable");
  }
  if (!all_finite(lp.objective) || !all_finite(lp.eq_matrix) || !all_finite(lp.eq_rhs) ||
      !all_finite(lp.ub_matrix) || !all_finite(lp.ub_rhs)) {
    throw std::invalid_argument("linear program data must be finite");
  }
  for (Eigen::Index j = 0; j < lp.lower.size(); ++j) {
    if (std::isnan(lp.lower[j]) || lp.lower[j] == kInfinity) throw std::invalid_argument("bad lower bound");
  }
  for (Eigen::Index j = 0; j < lp.upper.size(); ++j) {
    if (std::isnan(lp.upper[j]) || lp.upper[j] == -kInfinity) throw std::invalid_argument("bad upper bound");
  }
}

// min c'y  s.t.  A y = b, y >= 0, with x = offset + map * y.head(num_struct).
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::MatrixXd map;
  Eigen::VectorXd offset;
  int num_struct = 0;
  int num_columns = 0;  // structural + slack, artificials appended later
  std::vector<int> slack_of_row;  // -1 when the row has no usable slack
  bool bounds_infeasible = false;
};

StandardForm to_standard_form(const LinearProgram& lp, double tol) {
  const int n = lp.num_variables();
  StandardForm sf;
  sf.offset = Eigen::VectorXd::Zero(n);
  struct Entry { int var; int col; double coef; };
  std::vector<Entry> entries;
  std::vector<std::pair<int, double>> bound_rows;  // (column, upper) for y_col <= upper
  int ny = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : kInfinity;
    if (lo > hi + tol) sf.bounds_infeasible = true;
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= tol) {
      sf.offset[j] = lo;
    } else if (std::isfinite(lo)) {
      sf.offset[j] = lo;
      entries.push_back({j, ny, 1.0});
      if (std::isfinite(hi)) bound_rows.emplace_back(ny, hi - lo);
      ++ny;
    } else if (std::isfinite(hi)) {
      sf.offset[j] = hi;
      entries.push_back({j, ny++, -1.0});
    } else {
      entries.push_back({j, ny++, 1.0});
      entries.push_back({j, ny++, -1.0});
    }
  }
  sf.num_struct = ny;
  sf.map = Eigen::MatrixXd::Zero(n, ny);
  for (const auto& e : entries) sf.map(e.var, e.col) = e.coef;

  const int m_eq = static_cast<int>(lp.eq_matrix.rows());
  const int m_ub = static_cast<int>(lp.ub_matrix.rows()) + static_cast<int>(bound_rows.size());
  const int m = m_eq + m_ub;
  sf.num_columns = ny + m_ub;
  sf.A = Eigen::MatrixXd::Zero(m, sf.num_columns);
  sf.b = Eigen::VectorXd::Zero(m);
  sf.slack_of_row.assign(m, -1);
  if (m_eq > 0) {
    sf.A.block(0, 0, m_eq, ny) = lp.eq_matrix * sf.map;
    sf.b.head(m_eq) = lp.eq_rhs - lp.eq_matrix * sf.offset;
  }
  int row = m_eq;
  int slack = ny;
  for (Eigen::Index i = 0; i < lp.ub_matrix.rows(); ++i, ++row, ++slack) {
    sf.A.block(row, 0, 1, ny) = lp.ub_matrix.row(i) * sf.map;
    sf.b[row] = lp.ub_rhs[i] - lp.ub_matrix.row(i).dot(sf.offset);
    sf.A(row, slack) = 1.0;
    sf.slack_of_row[row] = slack;
  }
  for (const auto& [col, ub] : bound_rows) {
    sf.A(row, col) = 1.0;
    sf.b[row] = ub;
    sf.A(row, slack) = 1.0;
    sf.slack_of_row[row] = slack;
    ++row;
    ++slack;
  }
  for (int i = 0; i < m; ++i) {
    if (sf.b[i] < 0.0) {
      sf.A.row(i) *= -1.0;
      sf.b[i] = -sf.b[i];
      sf.slack_of_row[i] = -1;
    }
  }
  const double sign = lp.sense == LinearProgram::Sense::Maximize ? -1.0 : 1.0;
  sf.c = Eigen::VectorXd::Zero(sf.num_columns);
  sf.c.head(ny) = sign * (sf.map.transpose() * lp.objective);
  return sf;
}

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit, Singular };

class Tableau {
 public:
  Tableau(Eigen::MatrixXd A, Eigen::VectorXd b, std::vector<int> basis, const SimplexOptions& opt)
      : A0_(std::move(A)), b0_(std::move(b)), basis_(std::move(basis)), opt_(opt) {}

  bool refactor() {
    const Eigen::Index m = A0_.rows();
    if (m == 0) {
      T_ = A0_;
      rhs_ = b0_;
      return true;
    }
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A0_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    if (!(std::abs(lu.determinant()) > 1e-300)) return false;
    T_ = lu.solve(A0_);
    rhs_ = lu.solve(b0_);
    if (!T_.allFinite() || !rhs_.allFinite()) return false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (rhs_[i] < 0.0 && rhs_[i] > -opt_.feasibility_tolerance) rhs_[i] = 0.0;
    }
    return true;
  }

  PhaseOutcome run(const Eigen::VectorXd& cost, const std::vector<bool>& allowed, int& iterations) {
    const Eigen::Index m = A0_.rows();
    const Eigen::Index n = A0_.cols();
    std::vector<bool> is_basic(n, false);
    for (int j : basis_) is_basic[j] = true;
    int since_refactor = 0;
    while (true) {
      if (iterations >= opt_.max_iterations) return PhaseOutcome::IterationLimit;
      if (since_refactor >= opt_.refactor_interval) {
        if (!refactor()) return PhaseOutcome::Singular;
        since_refactor = 0;
      }
      int entering = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (is_basic[j] || !allowed[j]) continue;
        double reduced = cost[j];
        for (Eigen::Index i = 0; i < m; ++i) reduced -= cost[basis_[i]] * T_(i, j);
        if (reduced < -opt_.optimality_tolerance) {
          entering = static_cast<int>(j);
          break;
        }
      }
      if (entering < 0) return PhaseOutcome::Optimal;
      double best_ratio = kInfinity;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = T_(i, entering);
        if (a > opt_.pivot_tolerance) best_ratio = std::min(best_ratio, std::max(0.0, rhs_[i]) / a);
      }
      if (best_ratio == kInfinity) return PhaseOutcome::Unbounded;
      // Bland: among (near-)minimal ratios, the lowest basic variable leaves.
      const double cutoff = best_ratio + 1e-12 * (1.0 + best_ratio);
      int leaving_row = -1;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = T_(i, entering);
        if (a <= opt_.pivot_tolerance || std::max(0.0, rhs_[i]) / a > cutoff) continue;
        if (leaving_row < 0 || basis_[i] < basis_[leaving_row]) leaving_row = static_cast<int>(i);
      }
      is_basic[basis_[leaving_row]] = false;
      is_basic[entering] = true;
      pivot(leaving_row, entering);
      ++iterations;
      ++since_refactor;
    }
  }

  void pivot(int r, int e) {
    const double p = T_(r, e);
    T_.row(r) /= p;
    rhs_[r] /= p;
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, e);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      rhs_[i] -= f * rhs_[r];
    }
    basis_[r] = e;
  }

  void drop_rows(const std::vector<int>& rows) {
    std::vector<bool> drop(A0_.rows(), false);
    for (int r : rows) drop[r] = true;
    const Eigen::Index keep = A0_.rows() - static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd A(keep, A0_.cols());
    Eigen::VectorXd b(keep);
    std::vector<int> basis;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < A0_.rows(); ++i) {
      if (drop[i]) continue;
      A.row(k) = A0_.row(i);
      b[k] = b0_[i];
      basis.push_back(basis_[i]);
      ++k;
    }
    A0_ = std::move(A);
    b0_ = std::move(b);
    basis_ = std::move(basis);
  }

  const Eigen::MatrixXd& T() const { return T_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  const std::vector<int>& basis() const { return basis_; }
  Eigen::Index rows() const { return A0_.rows(); }
  Eigen::Index cols() const { return A0_.cols(); }

 private:
  Eigen::MatrixXd A0_;
  Eigen::VectorXd b0_;
  std::vector<int> basis_;
  Eigen::MatrixXd T_;
  Eigen::VectorXd rhs_;
  SimplexOptions opt_;
};

}  // namespace

double constraint_residual(const LinearProgram& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (lp.eq_matrix.rows() > 0) worst = std::max(worst, (lp.eq_matrix * x - lp.eq_rhs).cwiseAbs().maxCoeff());
  if (lp.ub_matrix.rows() > 0) worst = std::max(worst, (lp.ub_matrix * x - lp.ub_rhs).maxCoeff());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : kInfinity;
    if (std::isfinite(lo)) worst = std::max(worst, lo - x[j]);
    if (std::isfinite(hi)) worst = std::max(worst, x[j] - hi);
  }
  return worst;
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  validate(lp);
  LpSolution out;
  StandardForm sf = to_standard_form(lp, options.feasibility_tolerance);
  if (sf.bounds_infeasible) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  const Eigen::Index m = sf.A.rows();
  const int base_cols = sf.num_columns;

  // Artificial columns for rows without a +1 slack.
  std::vector<int> basis(m);
  int num_art = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (sf.slack_of_row[i] < 0) ++num_art;
  }
  Eigen::MatrixXd A(m, base_cols + num_art);
  A.leftCols(base_cols) = sf.A;
  if (num_art > 0) A.rightCols(num_art).setZero();
  int art = base_cols;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (sf.slack_of_row[i] >= 0) {
      basis[i] = sf.slack_of_row[i];
    } else {
      A(i, art) = 1.0;
      basis[i] = art++;
    }
  }
  const Eigen::Index total_cols = A.cols();
  Tableau tab(std::move(A), sf.b, basis, options);
  if (!tab.refactor()) return out;

  std::vector<bool> all_allowed(total_cols, true);
  const double scale = std::max(1.0, sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0);

  if (num_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total_cols);
    phase1.tail(num_art).setOnes();
    const PhaseOutcome r = tab.run(phase1, all_allowed, out.iterations);
    if (r != PhaseOutcome::Optimal) return out;
    if (!tab.refactor()) return out;
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] >= base_cols) infeasibility += std::abs(tab.rhs()[i]);
    }
    if (infeasibility > options.feasibility_tolerance * scale) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Pivot remaining zero-level artificials out; rows with no usable entry are redundant.
    std::vector<int> redundant;
    for (Eigen::Index i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] < base_cols) continue;
      int col = -1;
      for (int j = 0; j < base_cols; ++j) {
        if (std::abs(tab.T()(i, j)) > 1e-9 &&
            std::find(tab.basis().begin(), tab.basis().end(), j) == tab.basis().end()) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(static_cast<int>(i), col);
      } else {
        redundant.push_back(static_cast<int>(i));
      }
    }
    if (!redundant.empty()) tab.drop_rows(redundant);
    if (!tab.refactor()) return out;
  }

  std::vector<bool> allowed(total_cols, false);
  for (int j = 0; j < base_cols; ++j) allowed[j] = true;
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total_cols);
  phase2.head(base_cols) = sf.c;
  const PhaseOutcome r = tab.run(phase2, allowed, out.iterations);
  if (r == PhaseOutcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  if (r != PhaseOutcome::Optimal) return out;
  if (!tab.refactor()) return out;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(total_cols);
  for (Eigen::Index i = 0; i < tab.rows(); ++i) y[tab.basis()[i]] = std::max(0.0, tab.rhs()[i]);
  out.x = sf.offset + sf.map * y.head(sf.num_struct);
  out.value = lp.objective.dot(out.x);
  const double rhs_scale = std::max({1.0, lp.eq_rhs.size() ? lp.eq_rhs.cwiseAbs().maxCoeff() : 0.0,
                                     lp.ub_rhs.size() ? lp.ub_rhs.cwiseAbs().maxCoeff() : 0.0});
  if (constraint_residual(lp, out.x) > options.feasibility_tolerance * rhs_scale) {
    out.status = LpStatus::NumericalFailure;
    return out;
  }
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace stackelberg
