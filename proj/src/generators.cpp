#include "tropabel/generators.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tropabel::gen {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::int64_t uniform_i(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string vname(std::size_t k) { return "v" + std::to_string(k); }
std::string ename(std::size_t k) { return (k < 10 ? "e0" : "e") + std::to_string(k); }

Graph assemble(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<VertexId> vertices;
  for (std::size_t k = 0; k < n; ++k) vertices.push_back(vname(k));
  std::vector<Graph::EdgeSpec> edges;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    edges.push_back({ename(k), vname(pairs[k].first), vname(pairs[k].second)});
  return Graph(std::move(vertices), std::move(edges), vname(0));
}

std::pair<std::size_t, std::size_t> oriented(Rng& rng, std::size_t a, std::size_t b) {
  return uniform(rng, 0, 1) ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

Graph random_graph(Rng& rng, const GraphOptions& opt) {
  const std::size_t n = uniform(rng, opt.min_vertices, opt.max_vertices);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 1; k < n; ++k) pairs.push_back(oriented(rng, uniform(rng, 0, k - 1), k));
  const std::size_t budget = opt.max_edges > pairs.size() ? opt.max_edges - pairs.size() : 0;
  const std::size_t extra = uniform(rng, n == 1 ? std::min<std::size_t>(1, budget) : 0, budget);
  for (std::size_t k = 0; k < extra; ++k) {
    const std::size_t a = uniform(rng, 0, n - 1);
    if ((n == 1 || uniform(rng, 0, 7) == 0) && opt.loops) {
      pairs.emplace_back(a, a);
      continue;
    }
    if (n == 1) continue;
    std::size_t b = uniform(rng, 0, n - 2);
    if (b >= a) ++b;
    pairs.push_back(oriented(rng, a, b));
  }
  return assemble(n, pairs);
}

Graph random_biconnected_graph(Rng& rng, std::size_t max_vertices, std::size_t max_edges) {
  const std::size_t n = uniform(rng, 2, std::max<std::size_t>(2, max_vertices));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n == 2) {
    pairs.push_back(oriented(rng, 0, 1));
    pairs.push_back(oriented(rng, 0, 1));
  } else {
    for (std::size_t k = 0; k < n; ++k) pairs.push_back(oriented(rng, k, (k + 1) % n));
  }
  const std::size_t budget = max_edges > pairs.size() ? max_edges - pairs.size() : 0;
  const std::size_t extra = uniform(rng, 0, budget);
  for (std::size_t k = 0; k < extra; ++k) {
    const std::size_t a = uniform(rng, 0, n - 1);
    std::size_t b = uniform(rng, 0, n - 2);
    if (b >= a) ++b;
    pairs.push_back(oriented(rng, a, b));
  }
  return assemble(n, pairs);
}

Polarization random_polarization(const Graph& g, Rng& rng, std::int64_t degree, std::int64_t max_denominator) {
  const std::int64_t q = uniform_i(rng, 1, max_denominator);
  const std::size_t n = g.num_vertices();
  std::vector<Rational> values(n);
  Rational sum = 0;
  for (std::size_t v = 0; v + 1 < n; ++v) {
    values[v] = make_rational(uniform_i(rng, -2 * q, 2 * q), q);
    sum += values[v];
  }
  values[n - 1] = Rational(degree) - sum;
  return Polarization::from_values(g, std::move(values));
}

Divisor random_divisor(const Graph& g, Rng& rng, std::int64_t degree, std::int64_t spread) {
  Divisor d(g.num_vertices());
  for (Index v = 0; v < g.num_vertices(); ++v) d[v] = uniform_i(rng, -spread, spread);
  d[g.root()] += degree - d.degree();
  return d;
}

ConvexTuple random_convex_tuple(Rng& rng, std::size_t n, std::int64_t max_part) {
  std::vector<std::int64_t> parts(n + 1);
  for (auto& p : parts) p = uniform_i(rng, 0, max_part);
  if (std::all_of(parts.begin(), parts.end(), [](std::int64_t p) { return p == 0; })) parts.back() = 1;
  const std::int64_t total = std::accumulate(parts.begin(), parts.end(), std::int64_t{0});
  std::vector<Rational> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = make_rational(parts[j], total);
  return ConvexTuple(std::move(t));
}

IndexSet random_index_set(Rng& rng, std::size_t n) {
  std::vector<int> members;
  if (uniform(rng, 0, 1)) members.push_back(-1);
  for (std::size_t j = 1; j <= n; ++j)
    if (uniform(rng, 0, 1)) members.push_back(static_cast<int>(j));
  return IndexSet(std::move(members));
}

HypercubeSpec random_spec(const Graph& g, Rng& rng, std::size_t d) {
  HypercubeSpec spec;
  for (std::size_t k = 0; k < d; ++k) spec.f.push_back(uniform(rng, 0, g.num_edges() - 1));
  return spec;
}

Simplex random_simplex(Rng& rng, std::size_t d) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Simplex chain;
  VertexPoint q{std::vector<int>(d, 0)};
  chain.push_back(q);
  for (std::size_t k : perm) {
    q.bits[k] = 1;
    chain.push_back(q);
  }
  // Keep a random sub-chain of at least two vertices, order preserved.
  Simplex out;
  while (out.size() < 2) {
    out.clear();
    for (const auto& p : chain)
      if (uniform(rng, 0, 2) != 0) out.push_back(p);
  }
  return out;
}

}  // namespace tropabel::gen
