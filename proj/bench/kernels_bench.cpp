// Serial reference vs OpenMP (and min-cut / pruned where they exist) for each kernel.

#include <benchmark/benchmark.h>

#include "tropabel/generators.hpp"
#include "tropabel/kernels.hpp"
#include "tropabel/quasistability.hpp"

using namespace tropabel;

namespace {

// Redraws until the graph has exactly n vertices.
Graph graph_of_size(gen::Rng& rng, std::size_t n, std::size_t edges) {
  for (;;) {
    Graph g = gen::random_biconnected_graph(rng, n, edges);
    if (g.num_vertices() == n) return g;
  }
}

// A fixed biconnected graph with n vertices and a random degree-0 divisor.
kernels::BetaProblem violator_problem(std::size_t n) {
  gen::Rng rng(1000 + n);
  const Graph g = graph_of_size(rng, n, 2 * n);
  const Polarization mu = gen::random_polarization(g, rng, 0);
  const Divisor d = gen::random_divisor(g, rng, 0, 4);
  return make_beta_problem(g, g.root(), mu, d);
}

kernels::OracleProblem oracle_problem(std::int64_t bound) {
  gen::Rng rng(77);
  const Graph g = graph_of_size(rng, 5, 8);
  const Polarization mu = gen::random_polarization(g, rng, 0);
  const Divisor d = gen::random_divisor(g, rng, 0);
  return {make_beta_problem(g, g.root(), mu, d), laplacian_matrix(g), bound};
}

kernels::SeparableSweep sweep_problem(std::size_t edges) {
  gen::Rng rng(5);
  auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  kernels::SeparableSweep s;
  s.edges = edges;
  s.choices = 3;
  for (int r = 0; r < 16; ++r) {
    s.base.push_back(uni(-3, 3));
    s.lo.push_back(-uni(0, 2 * static_cast<std::int64_t>(edges)));
    s.hi.push_back(uni(0, 2 * static_cast<std::int64_t>(edges)));
    s.term.emplace_back(edges, std::vector<std::int64_t>(s.choices));
    for (auto& e : s.term.back())
      for (auto& x : e) x = uni(-2, 2);
  }
  return s;
}

template <auto Fn>
void violator(benchmark::State& state) {
  const auto p = violator_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p));
}

template <auto Fn>
void oracle(benchmark::State& state) {
  const auto p = oracle_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p));
}

template <auto Fn>
void sweep(benchmark::State& state) {
  const auto s = sweep_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(s));
}

template <auto Fn>
void enumerate(benchmark::State& state) {
  gen::Rng rng(9);
  const Graph g = graph_of_size(rng, static_cast<std::size_t>(state.range(0)), 7);
  const Polarization mu = gen::random_polarization(g, rng, 0);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, g.root(), mu, 0));
}

}  // namespace

BENCHMARK(violator<kernels::best_violator_serial>)->Name("violator/serial")->DenseRange(8, 14, 3);
BENCHMARK(violator<kernels::best_violator_parallel>)->Name("violator/openmp")->DenseRange(8, 14, 3);
BENCHMARK(violator<kernels::best_violator_mincut>)->Name("violator/mincut")->DenseRange(8, 14, 3);

BENCHMARK(oracle<kernels::oracle_scan_serial>)->Name("oracle_scan/serial")->Arg(2)->Arg(4);
BENCHMARK(oracle<kernels::oracle_scan_parallel>)->Name("oracle_scan/openmp")->Arg(2)->Arg(4);
BENCHMARK(oracle<kernels::oracle_scan_pruned>)->Name("oracle_scan/pruned")->Arg(2)->Arg(4);

BENCHMARK(sweep<kernels::sweep_serial>)->Name("sweep/serial")->Arg(6)->Arg(9);
BENCHMARK(sweep<kernels::sweep_parallel>)->Name("sweep/openmp")->Arg(6)->Arg(9);

BENCHMARK(enumerate<enumerate_quasistable_serial>)->Name("enumerate/serial")->Arg(4)->Arg(5);
BENCHMARK(enumerate<enumerate_quasistable>)->Name("enumerate/openmp")->Arg(4)->Arg(5);

BENCHMARK_MAIN();
