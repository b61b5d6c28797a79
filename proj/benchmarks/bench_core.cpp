#include <benchmark/benchmark.h>

#include "sparsecs/decoders.hpp"
#include "sparsecs/expander.hpp"
#include "sparsecs/experiments.hpp"
#include "sparsecs/matrix.hpp"
#include "sparsecs/nsp.hpp"

using namespace sparsecs;

namespace {

void BM_gen_bernoulli(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_bernoulli(256, m, 1.0 / 16.0, trial_seed(1, 0, trial++)));
  }
}
BENCHMARK(BM_gen_bernoulli)->Arg(100)->Arg(400)->Arg(1600);

void BM_theta_exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gen_left_regular(n, 40, 4, Seed{2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(theta_exact(a, 3, 4.0));
}
BENCHMARK(BM_theta_exact)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_nsp_exact(benchmark::State& state) {
  const auto a = gen_left_regular(12, 14, 3, Seed{3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(nsp_exact(a, 2, 0.5, 1.0));
}
BENCHMARK(BM_nsp_exact)->Unit(benchmark::kMillisecond);

struct Instance {
  Eigen::MatrixXd a;
  std::vector<double> y;
};

Instance planted(std::size_t m, std::uint64_t trial) {
  const Seed seed = trial_seed(4, 0, trial);
  const auto a = gen_bernoulli(256, m, 1.0 / 16.0, seed);
  return {to_dense(a), matvec(a, plant_signal(256, 4, seed))};
}

void BM_nnlad(benchmark::State& state) {
  const auto inst = planted(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(nnlad(inst.a, inst.y));
}
BENCHMARK(BM_nnlad)->Arg(80)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_nnls(benchmark::State& state) {
  const auto inst = planted(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(nnls_solve(inst.a, inst.y));
}
BENCHMARK(BM_nnls)->Arg(80)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
