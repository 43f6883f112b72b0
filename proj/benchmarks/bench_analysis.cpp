#include <benchmark/benchmark.h>

#include <random>

#include "matnet/analysis.hpp"

using namespace matnet;

namespace {

// Leader-rooted double star: node 0 leads, half the followers attach to it,
// the rest hang off follower 1. Weights alternate sign.
Graph double_star(int n, int d) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dist(1, 3);
  std::vector<WeightedEdge> edges;
  for (int v = 1; v < n; ++v) {
    MatQ w(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = r; c < d; ++c) {
        w(r, c) = Rational{dist(rng)};
        w(c, r) = w(r, c);
      }
    const int hub = (v <= n / 2 || v == 1) ? 0 : 1;
    edges.push_back({hub, v,
                     v % 3 == 0 ? EdgeSign::negative : EdgeSign::positive,
                     std::move(w)});
  }
  return Graph(n, d, std::move(edges), {0});
}

Dynamics bench_dynamics(int d) {
  return Dynamics{MatQ::identity(d), MatQ::identity(d) * Rational{2},
                  MatQ::identity(d), MatQ::identity(d) * Rational{2}};
}

void BM_ctrb_exact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const AugmentedSystem sys =
      assemble_fixed(double_star(n, d), bench_dynamics(d));
  for (auto _ : state) benchmark::DoNotOptimize(ctrb<Rational>(sys));
}
BENCHMARK(BM_ctrb_exact)->Args({4, 2})->Args({8, 2})->Args({16, 2})->Args({8, 3});

void BM_ctrb_float(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const AugmentedSystem sys =
      assemble_fixed(double_star(n, d), bench_dynamics(d));
  for (auto _ : state) benchmark::DoNotOptimize(ctrb<double>(sys));
}
BENCHMARK(BM_ctrb_float)->Args({4, 2})->Args({8, 2})->Args({16, 2})->Args({8, 3});

void BM_coarsest_ep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = double_star(n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(coarsest_ep(g, leader_init(g)));
}
BENCHMARK(BM_coarsest_ep)->Arg(8)->Arg(16)->Arg(32);

void BM_quotient_laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = double_star(n, 2);
  const Partition ep = coarsest_ep(g, leader_init(g));
  for (auto _ : state)
    benchmark::DoNotOptimize(quotient_laplacian(g, ep));
}
BENCHMARK(BM_quotient_laplacian)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
