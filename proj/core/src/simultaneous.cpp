#include "stackelberg/simultaneous.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stackelberg/response_lp.hpp"
#include "stackelberg/simplex.hpp"

namespace stackelberg {

namespace {

void check_strategy(const Table& mean, const Eigen::VectorXd& strategy) {
  if (strategy.size() != mean.rows()) throw std::invalid_argument("strategy length must equal A");
  if (!strategy.allFinite() || strategy.minCoeff() < -1e-9 || std::abs(strategy.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("strategy is not a distribution");
  }
}

}  // namespace

Eigen::VectorXd mixed_payoffs(const Table& mean, const Eigen::VectorXd& strategy) {
  check_strategy(mean, strategy);
  return mean.transpose() * strategy;
}

std::vector<int> mixed_best_response_set(const Table& mean_follower, const Eigen::VectorXd& strategy, double eps,
                                         double tolerance) {
  if (!(eps >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  const Eigen::VectorXd v = mixed_payoffs(mean_follower, strategy);
  const double best = v.maxCoeff();
  std::vector<int> out;
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    if (v[b] >= best - eps - tolerance) out.push_back(static_cast<int>(b));
  }
  return out;
}

ResponseChoice mixed_response(const Table& mean_leader, const Table& mean_follower, const Eigen::VectorXd& strategy,
                              double eps, TieBreaking tie, double tolerance) {
  const std::vector<int> br = mixed_best_response_set(mean_follower, strategy, eps, tolerance);
  const Eigen::VectorXd v = mixed_payoffs(mean_leader, strategy);
  ResponseChoice choice{br.front(), v[br.front()]};
  for (int b : br) {
    const bool better = tie == TieBreaking::Pessimistic ? v[b] < choice.value : v[b] > choice.value;
    if (better) choice = {b, v[b]};
  }
  return choice;
}

MixedPoint pessimistic_sup(const Table& mean_leader, const Table& mean_follower, double margin, double exclusion,
                           int max_follower_actions) {
  const Eigen::Index A = mean_leader.rows(), B = mean_leader.cols();
  if (A < 1 || B < 1 || mean_follower.rows() != A || mean_follower.cols() != B) {
    throw std::invalid_argument("mean tables must be nonempty and equally shaped");
  }
  if (B > max_follower_actions) {
    throw std::invalid_argument("pessimistic sup enumerates follower subsets; B = " + std::to_string(B) +
                                " exceeds the limit " + std::to_string(max_follower_actions));
  }
  if (!(margin >= 0.0) || !(exclusion >= 0.0)) throw std::invalid_argument("margins must be nonnegative");

  MixedPoint best;
  bool found = false;
  const Eigen::Index n = A + 1;  // pi, then t
  for (std::uint32_t mask = 1; mask < (1u << B); ++mask) {
    for (Eigen::Index star = 0; star < B; ++star) {
      if (!(mask >> star & 1u)) continue;
      LinearProgram lp;
      lp.sense = LinearProgram::Sense::Maximize;
      lp.objective = Eigen::VectorXd::Zero(n);
      lp.objective[A] = 1.0;
      lp.lower = Eigen::VectorXd::Zero(n);
      lp.lower[A] = -kInfinity;
      lp.upper = Eigen::VectorXd::Constant(n, kInfinity);
      lp.eq_matrix = Eigen::MatrixXd::Zero(1, n);
      lp.eq_matrix.leftCols(A).setOnes();
      lp.eq_rhs = Eigen::VectorXd::Ones(1);
      std::vector<Eigen::RowVectorXd> rows;
      std::vector<double> rhs;
      auto add = [&](const Eigen::VectorXd& coef_pi, double coef_t, double bound) {
        Eigen::RowVectorXd row(n);
        row.head(A) = coef_pi.transpose();
        row[A] = coef_t;
        rows.push_back(std::move(row));
        rhs.push_back(bound);
      };
      for (Eigen::Index b = 0; b < B; ++b) {
        const bool in = mask >> b & 1u;
        if (in) add(-mean_leader.col(b), 1.0, 0.0);  // t <= mu1(pi, b)
        if (b == star) continue;
        const Eigen::VectorXd diff = mean_follower.col(b) - mean_follower.col(star);
        add(diff, 0.0, 0.0);  // star is the follower's best action
        if (in) {
          add(-diff, 0.0, margin);
        } else {
          add(diff, 0.0, -margin - exclusion);
        }
      }
      lp.ub_matrix.resize(static_cast<Eigen::Index>(rows.size()), n);
      lp.ub_rhs.resize(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        lp.ub_matrix.row(static_cast<Eigen::Index>(i)) = rows[i];
        lp.ub_rhs[static_cast<Eigen::Index>(i)] = rhs[i];
      }
      const LpSolution sol = solve_lp(lp);
      ++best.lp_calls;
      if (sol.status == LpStatus::Infeasible) continue;
      if (sol.status != LpStatus::Optimal) {
        throw std::runtime_error(std::string("pessimistic cell LP failed: ") + to_string(sol.status));
      }
      if (!found || sol.value > best.value + 1e-12) {
        Eigen::VectorXd pi = sol.x.head(A).cwiseMax(0.0);
        pi /= pi.sum();
        const Eigen::VectorXd v = mean_leader.transpose() * pi;
        int arg = -1;
        for (Eigen::Index b = 0; b < B; ++b) {
          if ((mask >> b & 1u) && (arg < 0 || v[b] < v[arg])) arg = static_cast<int>(b);
        }
        best.strategy = std::move(pi);
        best.follower_action = arg;
        best.value = sol.value;
        found = true;
      }
    }
  }
  if (!found) throw std::logic_error("no feasible best-response cell");
  return best;
}

std::vector<Eigen::VectorXd> simplex_grid(int num_actions, int resolution) {
  if (num_actions < 1 || resolution < 1) throw std::invalid_argument("grid needs positive size and resolution");
  std::vector<Eigen::VectorXd> out;
  std::vector<int> counts(num_actions, 0);
  // Recursive composition of `resolution` into num_actions parts.
  auto rec = [&](auto&& self, int index, int remaining) -> void {
    if (index == num_actions - 1) {
      counts[index] = remaining;
      Eigen::VectorXd p(num_actions);
      for (int i = 0; i < num_actions; ++i) p[i] = static_cast<double>(counts[i]) / resolution;
      out.push_back(std::move(p));
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

double optimistic_mixed_gap(const Table& mean_leader, const Table& mean_follower, double eps,
                            const std::vector<Eigen::VectorXd>& candidates) {
  const double best_psi0 = best_mixed_leader_strategy(mean_leader, mean_follower, 0.0).value;
  double out = 0.0;
  for (const Eigen::VectorXd& pi : candidates) {
    const double psi_eps = mixed_response(mean_leader, mean_follower, pi, eps, TieBreaking::Optimistic).value;
    if (psi_eps < best_psi0 - eps - kExactTolerance) continue;
    const double psi0 = mixed_response(mean_leader, mean_follower, pi, 0.0, TieBreaking::Optimistic).value;
    out = std::max(out, psi_eps - psi0);
  }
  return out;
}

namespace {

SimultaneousLearnResult sample_phase(RewardOracle& oracle, const SimultaneousLearnConfig& config) {
  SimultaneousLearnResult out;
  out.samples_per_pair = sample_budget(oracle.num_leader_actions(), oracle.num_follower_actions(), config.epsilon,
                                       config.delta, config.hoeffding_constant);
  const std::int64_t before = oracle.queries_made();
  EmpiricalMeans means = estimate_means(oracle, out.samples_per_pair);
  out.total_queries = oracle.queries_made() - before;
  out.mean_leader_hat = std::move(means.leader);
  out.mean_follower_hat = std::move(means.follower);
  return out;
}

}  // namespace

SimultaneousLearnResult learn_simultaneous_optimistic(RewardOracle& oracle, const SimultaneousLearnConfig& config) {
  SimultaneousLearnResult out = sample_phase(oracle, config);
  const MixedLeaderResult r =
      best_mixed_leader_strategy(out.mean_leader_hat, out.mean_follower_hat, 0.75 * config.epsilon);
  out.strategy = r.strategy;
  out.follower_action = r.follower_action;
  out.value_hat = r.value;
  out.lp_calls = r.lp_calls;
  return out;
}

SimultaneousLearnResult learn_simultaneous_pessimistic(RewardOracle& oracle, const SimultaneousLearnConfig& config) {
  if (oracle.num_follower_actions() > config.max_follower_actions) {
    throw std::invalid_argument("too many follower actions for subset enumeration");
  }
  SimultaneousLearnResult out = sample_phase(oracle, config);
  const MixedPoint p = pessimistic_sup(out.mean_leader_hat, out.mean_follower_hat, 0.75 * config.epsilon,
                                       config.exclusion, config.max_follower_actions);
  out.strategy = p.strategy;
  out.follower_action = p.follower_action;
  out.value_hat = p.value;
  out.lp_calls = p.lp_calls;
  return out;
}

SimultaneousLearnResult learn_simultaneous(RewardOracle& oracle, const SimultaneousLearnConfig& config) {
  return config.tie == TieBreaking::Pessimistic ? learn_simultaneous_pessimistic(oracle, config)
                                                : learn_simultaneous_optimistic(oracle, config);
}

}  // namespace stackelberg
