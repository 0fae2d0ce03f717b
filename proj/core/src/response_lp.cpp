#include "stackelberg/response_lp.hpp"

#include <cmath>
#include <string>

namespace stackelberg {

LinearProgram occupancy_program(const EpisodicMDP& mdp, double follower_threshold,
                                LinearProgram::Sense sense) {
  if (std::isnan(follower_threshold)) throw std::invalid_argument("threshold is NaN");
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  const Eigen::Index n = static_cast<Eigen::Index>(mdp.num_cells());
  LinearProgram lp;
  lp.sense = sense;
  lp.objective = Eigen::Map<const Eigen::VectorXd>(mdp.rewards(Channel::Leader).data(), n);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Constant(n, kInfinity);
  for (int s = 0; s < S; ++s) {
    if (s == mdp.initial_state()) continue;
    for (int b = 0; b < B; ++b) lp.upper[static_cast<Eigen::Index>(mdp.cell(0, s, b))] = 0.0;
  }

  const Eigen::Index rows = 1 + static_cast<Eigen::Index>(H - 1) * S;
  lp.eq_matrix = Eigen::MatrixXd::Zero(rows, n);
  lp.eq_rhs = Eigen::VectorXd::Zero(rows);
  for (int b = 0; b < B; ++b) lp.eq_matrix(0, static_cast<Eigen::Index>(mdp.cell(0, mdp.initial_state(), b))) = 1.0;
  lp.eq_rhs[0] = 1.0;
  Eigen::Index row = 1;
  for (int h = 0; h + 1 < H; ++h) {
    for (int t = 0; t < S; ++t, ++row) {
      for (int s = 0; s < S; ++s) {
        for (int b = 0; b < B; ++b) {
          lp.eq_matrix(row, static_cast<Eigen::Index>(mdp.cell(h, s, b))) = mdp.transition_row(h, s, b)[t];
        }
      }
      for (int b = 0; b < B; ++b) lp.eq_matrix(row, static_cast<Eigen::Index>(mdp.cell(h + 1, t, b))) -= 1.0;
    }
  }

  if (std::isfinite(follower_threshold)) {
    lp.ub_matrix = -Eigen::Map<const Eigen::RowVectorXd>(mdp.rewards(Channel::Follower).data(), n);
    lp.ub_rhs = Eigen::VectorXd::Constant(1, -follower_threshold);
  } else if (follower_threshold > 0.0) {
    lp.ub_matrix = Eigen::MatrixXd::Zero(1, n);
    lp.ub_rhs = Eigen::VectorXd::Constant(1, -1.0);  // 0 <= -1: never satisfiable
  }
  return lp;
}

namespace {

ResponseLpResult solve_response(const EpisodicMDP& mdp, double threshold, LinearProgram::Sense sense) {
  const LinearProgram lp = occupancy_program(mdp, threshold, sense);
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) {
    throw InfeasibleThreshold("follower threshold " + std::to_string(threshold) + " is not achievable");
  }
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error(std::string("occupancy LP failed: ") + to_string(sol.status));
  }
  OccupancyMeasure occ{mdp.horizon(), mdp.num_states(), mdp.num_actions(),
                       std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size())};
  const double tol = 1e-8 * std::max(1.0, std::isfinite(threshold) ? std::abs(threshold) : 1.0);
  Policy policy = policy_of_occupancy(mdp, occ, tol);
  const double follower = occupancy_value(mdp, occ, Channel::Follower);
  return {std::move(policy), std::move(occ), sol.value, follower};
}

}  // namespace

ResponseLpResult worst_case_best_response(const EpisodicMDP& mdp, double follower_threshold) {
  return solve_response(mdp, follower_threshold, LinearProgram::Sense::Minimize);
}

ResponseLpResult best_case_best_response(const EpisodicMDP& mdp, double follower_threshold) {
  return solve_response(mdp, follower_threshold, LinearProgram::Sense::Maximize);
}

ResponseLpResult constrained_response(const EpisodicMDP& mdp, double follower_threshold, TieBreaking tie) {
  return tie == TieBreaking::Pessimistic ? worst_case_best_response(mdp, follower_threshold)
                                         : best_case_best_response(mdp, follower_threshold);
}

MixedLeaderResult best_mixed_leader_strategy(const Table& mean_leader, const Table& mean_follower,
                                             double slack) {
  if (mean_leader.rows() < 1 || mean_leader.cols() < 1 || mean_leader.rows() != mean_follower.rows() ||
      mean_leader.cols() != mean_follower.cols()) {
    throw std::invalid_argument("mean tables must be nonempty and equally shaped");
  }
  if (!(slack >= 0.0) || !std::isfinite(slack)) throw std::invalid_argument("slack must be finite and >= 0");
  const Eigen::Index A = mean_leader.rows(), B = mean_leader.cols();
  MixedLeaderResult best;
  bool found = false;
  for (Eigen::Index b = 0; b < B; ++b) {
    LinearProgram lp;
    lp.sense = LinearProgram::Sense::Maximize;
    lp.objective = mean_leader.col(b);
    lp.eq_matrix = Eigen::MatrixXd::Ones(1, A);
    lp.eq_rhs = Eigen::VectorXd::Ones(1);
    if (B > 1) {
      lp.ub_matrix.resize(B - 1, A);
      lp.ub_rhs = Eigen::VectorXd::Constant(B - 1, slack);
      Eigen::Index r = 0;
      for (Eigen::Index other = 0; other < B; ++other) {
        if (other == b) continue;
        lp.ub_matrix.row(r++) = (mean_follower.col(other) - mean_follower.col(b)).transpose();
      }
    }
    const LpSolution sol = solve_lp(lp);
    ++best.lp_calls;
    if (sol.status == LpStatus::Infeasible) continue;
    if (sol.status != LpStatus::Optimal) {
      throw std::runtime_error(std::string("leader strategy LP failed: ") + to_string(sol.status));
    }
    if (!found || sol.value > best.value + 1e-12) {
      best.strategy = sol.x.cwiseMax(0.0);
      best.strategy /= best.strategy.sum();
      best.follower_action = static_cast<int>(b);
      best.value = sol.value;
      found = true;
    }
  }
  if (!found) throw std::logic_error("no follower action is a best response to any leader strategy");
  return best;
}

}  // namespace stackelberg
