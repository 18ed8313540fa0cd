#pragma once

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "tropabel/generators.hpp"
#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"

namespace support {

using namespace tropabel;

// TROPABEL_TEST_SEED overrides the fixed seed for exploratory runs.
inline std::uint64_t seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("TROPABEL_TEST_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline Divisor div_of(const Graph& g, std::initializer_list<std::pair<const char*, std::int64_t>> entries) {
  Divisor d(g.num_vertices());
  for (const auto& [id, w] : entries) d[g.vertex_index(id)] += w;
  return d;
}

inline std::vector<std::int64_t> raw(const Divisor& d) { return d.c; }

inline VertexSet set_of(std::uint64_t mask, std::size_t n) {
  VertexSet s;
  for (Index v = 0; v < n; ++v)
    if ((mask >> v) & 1) s.push_back(v);
  return s;
}

struct Instance {
  Graph g;
  Polarization mu;
  Divisor d;
};

// Graphs |V| ≤ 6, |E| ≤ 9, µ with denominators ≤ 4, D of the same degree.
inline Instance random_instance(gen::Rng& rng, gen::GraphOptions opt = {}) {
  Graph g = gen::random_graph(rng, opt);
  const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-3, 3)(rng);
  Polarization mu = gen::random_polarization(g, rng, k);
  Divisor d = gen::random_divisor(g, rng, k);
  return {std::move(g), std::move(mu), std::move(d)};
}

}  // namespace support
