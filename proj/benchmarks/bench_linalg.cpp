#include <benchmark/benchmark.h>

#include <random>

#include "matnet/linalg.hpp"

using namespace matnet;

namespace {

MatQ random_int_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_int_distribution<int> dist(-10, 10);
  MatQ m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Rational{dist(rng)};
  return m;
}

void BM_rank_exact(benchmark::State& state) {
  std::mt19937_64 rng(42);
  const int n = static_cast<int>(state.range(0));
  const MatQ m = random_int_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::rank(m));
}
BENCHMARK(BM_rank_exact)->Arg(8)->Arg(16)->Arg(32);

void BM_rank_float(benchmark::State& state) {
  std::mt19937_64 rng(42);
  const int n = static_cast<int>(state.range(0));
  const MatD m = to_double(random_int_matrix(rng, n, n));
  for (auto _ : state) benchmark::DoNotOptimize(linalg::rank(m));
}
BENCHMARK(BM_rank_float)->Arg(8)->Arg(16)->Arg(32);

void BM_fixpoint_exact(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int n = static_cast<int>(state.range(0));
  const MatQ map = random_int_matrix(rng, n, n);
  const MatQ seed_mat = random_int_matrix(rng, n, 2);
  const MatQ maps[] = {map};
  const auto seed = linalg::column_space(seed_mat);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        linalg::invariant_image_fixpoint(std::span<const MatQ>(maps), seed));
}
BENCHMARK(BM_fixpoint_exact)->Arg(8)->Arg(16)->Arg(32);

void BM_solve_right_exact(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const int n = static_cast<int>(state.range(0));
  const MatQ c = random_int_matrix(rng, n, n);
  const MatQ rhs = c * random_int_matrix(rng, n, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(linalg::solve_right(c, rhs));
}
BENCHMARK(BM_solve_right_exact)->Arg(8)->Arg(16);

}  // namespace
