#include "stackelberg/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace stackelberg {

std::int64_t sample_budget(int num_leader, int num_follower, double eps, double delta,
                           double hoeffding_constant) {
  if (num_leader < 1 || num_follower < 1) throw std::invalid_argument("action counts must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(hoeffding_constant > 0.0)) throw std::invalid_argument("hoeffding constant must be positive");
  const double pairs = static_cast<double>(num_leader) * num_follower;
  const double n = std::ceil(hoeffding_constant * std::log(4.0 * pairs / delta) / (eps * eps));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

EmpiricalMeans estimate_means(RewardOracle& oracle, std::int64_t samples_per_pair) {
  const int na = oracle.num_leader_actions();
  const int nb = oracle.num_follower_actions();
  if (na < 1 || nb < 1) throw std::invalid_argument("oracle reports zero actions");
  if (samples_per_pair < 1) throw std::invalid_argument("need at least one sample per pair");
  EmpiricalMeans out{Table::Zero(na, nb), Table::Zero(na, nb)};
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      // Running mean: a constant stream averages to itself exactly.
      double m1 = 0.0, m2 = 0.0;
      for (std::int64_t j = 0; j < samples_per_pair; ++j) {
        const RewardSample r = oracle.query(a, b);
        const double k = static_cast<double>(j + 1);
        m1 += (r.leader - m1) / k;
        m2 += (r.follower - m2) / k;
      }
      out.leader(a, b) = m1;
      out.follower(a, b) = m2;
    }
  }
  return out;
}

BanditLearnResult select_from_estimates(const Table& mean_leader_hat, const Table& mean_follower_hat,
                                        double eps, TieBreaking tie) {
  const double margin = 0.75 * eps;
  const int na = static_cast<int>(mean_leader_hat.rows());
  BanditLearnResult out;
  out.mean_leader_hat = mean_leader_hat;
  out.mean_follower_hat = mean_follower_hat;
  out.response_sets.reserve(na);
  out.values.reserve(na);
  std::vector<int> chosen(na);
  for (int a = 0; a < na; ++a) {
    out.response_sets.push_back(best_response_set(mean_follower_hat, a, margin, 0.0).members);
    const ResponseChoice r = tie_broken_response(mean_leader_hat, mean_follower_hat, a, margin, tie, 0.0);
    out.values.push_back(r.value);
    chosen[a] = r.follower_action;
  }
  int best = 0;
  for (int a = 1; a < na; ++a) {
    if (out.values[a] > out.values[best]) best = a;
  }
  out.leader_action = best;
  out.follower_action = chosen[best];
  return out;
}

BanditLearnResult learn_bandit_with_budget(RewardOracle& oracle, std::int64_t samples_per_pair,
                                           double eps, TieBreaking tie) {
  const std::int64_t before = oracle.queries_made();
  const EmpiricalMeans means = estimate_means(oracle, samples_per_pair);
  BanditLearnResult out = select_from_estimates(means.leader, means.follower, eps, tie);
  out.samples_per_pair = samples_per_pair;
  out.total_queries = oracle.queries_made() - before;
  return out;
}

BanditLearnResult learn_bandit(RewardOracle& oracle, const BanditLearnConfig& config) {
  const std::int64_t n = sample_budget(oracle.num_leader_actions(), oracle.num_follower_actions(),
                                       config.epsilon, config.delta, config.hoeffding_constant);
  return learn_bandit_with_budget(oracle, n, config.epsilon, config.tie);
}

}  // namespace stackelberg
