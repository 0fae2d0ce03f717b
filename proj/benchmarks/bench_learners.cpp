#include <benchmark/benchmark.h>

#include "stackelberg/bandit.hpp"
#include "stackelberg/instances.hpp"
#include "stackelberg/linear.hpp"

namespace sl = stackelberg;

namespace {

void BM_CoreSet(benchmark::State& state) {
  sl::Rng rng(11);
  const int d = static_cast<int>(state.range(0));
  std::normal_distribution<double> g;
  const Eigen::MatrixXd f = Eigen::MatrixXd::NullaryExpr(1000, d, [&] { return g(rng); });
  for (auto _ : state) benchmark::DoNotOptimize(sl::core_set(f).members.size());
}
BENCHMARK(BM_CoreSet)->Arg(2)->Arg(8)->Arg(32);

void BM_LearnBandit(benchmark::State& state) {
  sl::Rng rng(12);
  const int n = static_cast<int>(state.range(0));
  const auto game = sl::random_game(n, n, sl::GameStructure::General, rng);
  sl::BanditLearnConfig cfg;
  cfg.epsilon = 0.25;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    sl::GameSampler sampler(game, seed++);
    benchmark::DoNotOptimize(sl::learn_bandit(sampler, cfg).leader_action);
  }
  state.SetItemsProcessed(state.iterations() * n * n * sl::sample_budget(n, n, 0.25, 0.1));
}
BENCHMARK(BM_LearnBandit)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
