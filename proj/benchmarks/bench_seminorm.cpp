#include <benchmark/benchmark.h>

#include <random>

#include "wsp/seminorm.hpp"

namespace {

wsp::GridField random_field(const wsp::Grid& g, int nu, std::uint64_t seed) {
  wsp::GridField u(g, nu);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : u.values) v = dist(rng);
  return u;
}

void BM_Gagliardo1D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wsp::Grid g(1, n, 1.0);
  wsp::GridField u = random_field(g, 1, 42);
  wsp::SeminormEngine engine(g, wsp::SobolevParams(0.5, 2.0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.seminorm(u).seminorm_p);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Gagliardo1D)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_Gagliardo2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wsp::Grid g(2, n, 1.0);
  wsp::GridField u = random_field(g, 2, 42);
  wsp::SeminormEngine engine(g, wsp::SobolevParams(0.5, 2.0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.seminorm(u).seminorm_p);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Gagliardo2D)->RangeMultiplier(2)->Range(16, 64)->Complexity();

// p = 2 avoids pow in the inner loop; general p pays for it.
void BM_GagliardoGeneralP(benchmark::State& state) {
  wsp::Grid g(2, 32, 1.0);
  wsp::GridField u = random_field(g, 2, 42);
  wsp::SeminormEngine engine(g, wsp::SobolevParams(0.5, 1.7), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.seminorm(u).seminorm_p);
  }
}
BENCHMARK(BM_GagliardoGeneralP);

void BM_SparseNorm(benchmark::State& state) {
  wsp::Grid g(2, 48, 1.0);
  wsp::SeminormEngine engine(g, wsp::SobolevParams(0.5, 2.0), 1);
  engine.kernel_row_sums();
  wsp::GridField w(g, 2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t node = rng() % g.node_count();
    w.at(node)[0] = dist(rng);
    w.at(node)[1] = dist(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.sparse_norm_parts(w).seminorm);
  }
}
BENCHMARK(BM_SparseNorm);

}  // namespace

BENCHMARK_MAIN();
