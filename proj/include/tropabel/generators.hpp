#pragma once

// Seeded random instances for property suites, selftest and benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "tropabel/abel.hpp"
#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/tropical.hpp"

namespace tropabel::gen {

using Rng = std::mt19937_64;

struct GraphOptions {
  std::size_t min_vertices = 1;
  std::size_t max_vertices = 6;
  std::size_t max_edges = 9;
  bool loops = true;  // occasional loops; parallel edges always possible
};

// Connected: a random tree plus extra edges. Vertices "v0".., edges "e0"..
Graph random_graph(Rng& rng, const GraphOptions& opt = {});
// A cycle through every vertex plus random chords; no loops.
Graph random_biconnected_graph(Rng& rng, std::size_t max_vertices = 6, std::size_t max_edges = 9);

// Values k/q with q ∈ [1, max_denominator], adjusted so they sum to degree.
Polarization random_polarization(const Graph& g, Rng& rng, std::int64_t degree, std::int64_t max_denominator = 4);
// Entries in [−spread, spread], root entry adjusted to the given degree.
Divisor random_divisor(const Graph& g, Rng& rng, std::int64_t degree, std::int64_t spread = 3);

// t_j = k_j / Σ k over n+1 positive parts, denominators at most max_parts·(n+1).
ConvexTuple random_convex_tuple(Rng& rng, std::size_t n, std::int64_t max_part = 12);
IndexSet random_index_set(Rng& rng, std::size_t n);

// f_1..f_d drawn from the edges (repeats allowed).
HypercubeSpec random_spec(const Graph& g, Rng& rng, std::size_t d);
// A random face of a random staircase simplex (at least two vertices).
Simplex random_simplex(Rng& rng, std::size_t d);

}  // namespace tropabel::gen
