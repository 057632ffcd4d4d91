// Serial reference vs OpenMP kernels. Argument 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "nsdist/drs.hpp"
#include "nsdist/gossip.hpp"
#include "nsdist/mspd.hpp"
#include "nsdist/rng.hpp"

using namespace nsdist;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

NodeMatrix random_block(Index d, Index n) {
  const SeededStream rng(7);
  NodeMatrix x(d, n);
  for (Index j = 0; j < n; ++j) x.col(j) = rng.gaussian_vector(0, static_cast<std::uint64_t>(j), d);
  return x;
}

ProblemInstance distance_problem(std::size_t n, Index d) {
  const SeededStream rng(11);
  std::vector<ObjectiveOracle> locals;
  for (std::size_t i = 0; i < n; ++i) {
    locals.push_back(euclidean_distance(0.1 * rng.gaussian_vector(0, i, d)));
  }
  return make_problem(std::move(locals), 1.0);
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "omp"); }

void BM_gossip_multiply(benchmark::State& state) {
  const auto w = laplacian(grid_graph(32, 32));
  const NodeMatrix x = random_block(64, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(gossip_multiply(x, w, mode(state)));
  label(state);
}

void BM_accelerated_gossip(benchmark::State& state) {
  const auto w = laplacian(grid_graph(32, 32));
  const NodeMatrix x = random_block(64, 1024);
  const unsigned k = chebyshev_steps(w);
  for (auto _ : state) benchmark::DoNotOptimize(accelerated_gossip(x, w, k, mode(state)));
  label(state);
}

void BM_drs_run(benchmark::State& state) {
  const auto net = cycle_graph(64);
  const auto problem = distance_problem(64, 32);
  const auto cfg = drs_config(std::size_t{20}, std::size_t{50}, 1.0, 1.0, 32, 3);
  DrsOptions opt;
  opt.execution = mode(state);
  for (auto _ : state) {
    CostModel clock(net);
    benchmark::DoNotOptimize(run_drs(problem, net, cfg, clock, opt).theta);
  }
  label(state);
}

void BM_mspd_run(benchmark::State& state) {
  const auto net = cycle_graph(64);
  const auto w = laplacian(net);
  const auto problem = distance_problem(64, 32);
  const auto cfg = mspd_config(std::size_t{20}, std::size_t{200}, 1.0, 1.0, w, 1.0);
  MspdOptions opt;
  opt.execution = mode(state);
  for (auto _ : state) {
    CostModel clock(net);
    benchmark::DoNotOptimize(run_mspd(problem, w, cfg, clock, opt).theta_bar);
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_gossip_multiply)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_accelerated_gossip)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_drs_run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mspd_run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
