#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "mixdet/commutator.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/selection.hpp"

using namespace mixdet;

namespace {

ComplexMatrix zero_diagonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = Complex(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  return a * Complex(1.0 / operator_norm(a));
}

HermitianTuple tuple(std::size_t n, std::size_t k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> ms;
  for (std::size_t i = 0; i < k; ++i) ms.push_back(zero_diagonal(n, rng));
  return HermitianTuple(ms);
}

void BM_Mdp(benchmark::State& state) {
  const auto t = tuple(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mdp(t));
}
BENCHMARK(BM_Mdp)->Args({6, 2})->Args({8, 2})->Args({10, 3})->Args({12, 2});

void BM_CharPoly(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = zero_diagonal(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(char_poly(a));
}
BENCHMARK(BM_CharPoly)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_GreedyPaving(benchmark::State& state) {
  const auto t = tuple(static_cast<std::size_t>(state.range(0)), 2, 3);
  const auto r = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_paving(t, r));
}
BENCHMARK(BM_GreedyPaving)->Args({6, 2})->Args({8, 2})->Args({8, 3})->Unit(benchmark::kMillisecond);

void BM_GreedyRestricted(benchmark::State& state) {
  const auto t = tuple(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(joint_restricted_invertibility(t, 0.9));
}
BENCHMARK(BM_GreedyRestricted)->Args({40, 1})->Args({60, 1})->Args({40, 2})->Unit(benchmark::kMillisecond);

void BM_Commutator(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const auto m = static_cast<std::size_t>(state.range(0));
  ComplexMatrix a(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = Complex(g(rng), g(rng));
  const Complex tr = a.trace() / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) a(i, i) -= tr;
  for (auto _ : state) benchmark::DoNotOptimize(recursive_commutator(a));
}
BENCHMARK(BM_Commutator)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
