#include <benchmark/benchmark.h>

#include "stackelberg/instances.hpp"
#include "stackelberg/response_lp.hpp"
#include "stackelberg/simplex.hpp"

namespace sl = stackelberg;

namespace {

// Random bounded LP: n variables in [0, 1], n/2 packing rows.
sl::LinearProgram random_lp(int n, std::uint64_t seed) {
  sl::Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sl::LinearProgram lp;
  lp.sense = sl::LinearProgram::Sense::Maximize;
  lp.objective = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
  lp.ub_matrix = Eigen::MatrixXd::NullaryExpr(n / 2, n, [&] { return u(rng); });
  lp.ub_rhs = Eigen::VectorXd::Constant(n / 2, n / 4.0);
  lp.upper = Eigen::VectorXd::Ones(n);
  return lp;
}

void BM_SolveLp(benchmark::State& state) {
  const auto lp = random_lp(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(sl::solve_lp(lp).value);
}
BENCHMARK(BM_SolveLp)->Arg(10)->Arg(40)->Arg(160);

void BM_WorstCaseResponse(benchmark::State& state) {
  sl::Rng rng(3);
  const int h = static_cast<int>(state.range(0));
  const auto m = sl::random_mdp(h, 3, 3, rng);
  const double v2 = sl::value_iteration(m, sl::Channel::Follower).value;
  for (auto _ : state) benchmark::DoNotOptimize(sl::worst_case_best_response(m, v2 - 0.1).leader_value);
}
BENCHMARK(BM_WorstCaseResponse)->Arg(2)->Arg(4)->Arg(8);

void BM_MixedLeaderLp(benchmark::State& state) {
  sl::Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  const auto g = sl::random_game(n, n, sl::GameStructure::General, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(sl::best_mixed_leader_strategy(g.mean_leader(), g.mean_follower(), 0.1).value);
}
BENCHMARK(BM_MixedLeaderLp)->Arg(3)->Arg(10)->Arg(30);

}  // namespace
