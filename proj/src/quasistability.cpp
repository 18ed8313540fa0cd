#include "tropabel/quasistability.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tropabel/error.hpp"
#include "tropabel/linalg.hpp"

namespace tropabel {

Polarization Polarization::zero(const Graph& g) { return Polarization{std::vector<Rational>(g.num_vertices(), 0), 0}; }

Polarization Polarization::from_values(const Graph& g, std::vector<Rational> values) {
  if (values.size() != g.num_vertices()) throw InputError("polarization size does not match the graph");
  Rational sum = 0;
  for (const auto& q : values) sum += q;
  if (!is_integer(sum)) throw InputError("polarization values must sum to an integer, got " + to_string(sum));
  return Polarization{std::move(values), to_int64_exact(sum)};
}

Rational Polarization::of(const VertexSet& v) const {
  Rational s = 0;
  for (Index x : v) s += values.at(x);
  return s;
}

std::int64_t Polarization::common_denominator() const {
  std::int64_t l = 1;
  for (const auto& q : values) l = lcm64(l, to_int64(q.get_den()));
  return l;
}

Polarization induced_polarization(const Subdivision& s, const Polarization& mu) {
  std::vector<Rational> vals(s.refined.num_vertices(), 0);
  for (Index v = 0; v < s.parent.num_vertices(); ++v) vals[s.vertex_map[v]] = mu.values[v];
  return Polarization{std::move(vals), mu.degree};
}

Divisor expand(const Subdivision& s, const PseudoDivisor& pd) {
  Divisor d(s.refined.num_vertices());
  for (Index v = 0; v < s.parent.num_vertices(); ++v) d[s.vertex_map[v]] = pd.base[v];
  for (Index x = 0; x < s.refined.num_vertices(); ++x)
    if (s.is_exceptional(x)) d[x] = -1;
  return d;
}

PseudoDivisor collapse(const Subdivision& s, const Divisor& d) {
  PseudoDivisor pd{{}, Divisor(s.parent.num_vertices())};
  for (Index v = 0; v < s.parent.num_vertices(); ++v) pd.base[v] = d[s.vertex_map[v]];
  for (Index x = 0; x < s.refined.num_vertices(); ++x) {
    if (!s.is_exceptional(x)) continue;
    if (d[x] != -1) throw InputError("exceptional vertex " + s.refined.vertex_id(x) + " must carry -1");
    pd.edges.push_back(s.exceptional_parent[x]);
  }
  std::sort(pd.edges.begin(), pd.edges.end());
  return pd;
}

Rational beta(const Graph& g, const Polarization& mu, const Divisor& d, const VertexSet& v) {
  Rational b = 0;
  for (Index x : v) b += d[x];
  b -= mu.of(v);
  b += make_rational(cut(g, v).size, 2);
  return b;
}

namespace {

kernels::BetaProblem topology(const Graph& g) {
  kernels::BetaProblem p;
  p.n = g.num_vertices();
  for (const Edge& e : g.edges())
    if (!e.is_loop()) p.edges.emplace_back(e.src, e.dst);
  return p;
}

void fill_weights(kernels::BetaProblem& p, const Polarization& mu, const Divisor& d, std::int64_t l) {
  p.cut_weight = l;
  p.weight.resize(p.n);
  for (Index v = 0; v < p.n; ++v) {
    Rational lmu = mu.values[v] * (2 * l);
    p.weight[v] = 2 * l * d[v] - to_int64_exact(lmu);
  }
}

void require_degree(const Polarization& mu, const Divisor& d) {
  if (d.degree() != mu.degree)
    throw InputError("divisor degree " + std::to_string(d.degree()) + " differs from polarization degree " +
                     std::to_string(mu.degree));
}

}  // namespace

kernels::BetaProblem make_beta_problem(const Graph& g, Index v0, const Polarization& mu, const Divisor& d) {
  require_degree(mu, d);
  kernels::BetaProblem p = topology(g);
  p.root = v0;
  fill_weights(p, mu, d, mu.common_denominator());
  return p;
}

QuasistabilityCheck is_quasistable(const Graph& g, Index v0, const Polarization& mu, const Divisor& d) {
  auto p = make_beta_problem(g, v0, mu, d);
  auto v = kernels::best_violator(p);
  if (!v) return {};
  return {false, v->set};
}

QuasistabilityCheck is_quasistable_pseudo(const Graph& g, Index v0, const Polarization& mu, const PseudoDivisor& pd) {
  Subdivision s = subdivide_edges(g, pd.edges);
  return is_quasistable(s.refined, s.vertex_map[v0], induced_polarization(s, mu), expand(s, pd));
}

QsReduction qs_reduce(const Graph& g, Index v0, const Polarization& mu, const Divisor& d, QsOptions opt) {
  QsReduction r{d, ZeroChain(g.num_vertices()), 0};
  auto p = make_beta_problem(g, v0, mu, d);
  const std::int64_t scale = 2 * p.cut_weight;
  while (auto v = kernels::best_violator(p)) {
    if (r.firings >= opt.iteration_cap)
      throw IterationCap("qs_reduce exceeded " + std::to_string(opt.iteration_cap) + " firings");
    ZeroChain chi(g.num_vertices());
    for (Index x : complement(g, v->set)) chi[x] = 1;
    // Chips cross the cut into the violating set.
    Divisor moved = laplacian(g, chi);
    r.divisor -= moved;
    r.potential += chi;
    for (Index x = 0; x < p.n; ++x) p.weight[x] -= scale * moved[x];
    ++r.firings;
  }
  const std::int64_t shift = r.potential[v0];
  for (auto& m : r.potential.c) m -= shift;
  return r;
}

std::vector<std::vector<std::int64_t>> laplacian_matrix(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::int64_t>> lap(n, std::vector<std::int64_t>(n, 0));
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) continue;
    lap[e.src][e.src] += 1;
    lap[e.dst][e.dst] += 1;
    lap[e.src][e.dst] -= 1;
    lap[e.dst][e.src] -= 1;
  }
  return lap;
}

OracleResult qs_reduce_oracle(const Graph& g, Index v0, const Polarization& mu, const Divisor& d, std::int64_t bound,
                              OracleScan scan) {
  kernels::OracleProblem op{make_beta_problem(g, v0, mu, d), laplacian_matrix(g), bound};
  auto found = scan == OracleScan::Pruned       ? kernels::oracle_scan_pruned(op)
               : scan == OracleScan::Exhaustive ? kernels::oracle_scan_serial(op)
                                                : kernels::oracle_scan_parallel(op);
  if (found.empty()) throw NoneFound("no quasistable divisor with |M| <= " + std::to_string(bound));
  if (found.size() > 1)
    throw MultipleFound(std::to_string(found.size()) + " quasistable divisors in one class (bound " +
                        std::to_string(bound) + ")");
  ZeroChain m(std::vector<std::int64_t>(found.front()));
  // D' = D + ∂δ(M'), so D − D' = ∂δ(−M').
  OracleResult r{d + laplacian(g, m), -m};
  return r;
}

ZeroChain laplacian_potential(const Graph& g, Index v0, const Divisor& d1, const Divisor& d2) {
  if (d1.degree() != d2.degree()) throw InputError("laplacian_potential needs divisors of equal degree");
  const std::size_t n = g.num_vertices();
  ZeroChain m(n);
  if (n == 1) return m;
  auto lap = laplacian_matrix(g);
  std::vector<Index> free;
  for (Index v = 0; v < n; ++v)
    if (v != v0) free.push_back(v);
  linalg::Matrix a = linalg::zeros(free.size(), free.size());
  linalg::Vector b(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = 0; j < free.size(); ++j) a[i][j] = lap[free[i]][free[j]];
    b[i] = d1[free[i]] - d2[free[i]];
  }
  auto x = linalg::solve(std::move(a), std::move(b));
  if (!x) throw NotPrincipal("divisors are not linearly equivalent");
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (!is_integer((*x)[i])) throw NotPrincipal("divisors are not linearly equivalent");
    m[free[i]] = to_int64_exact((*x)[i]);
  }
  if (laplacian(g, m) != d1 - d2) throw NotPrincipal("divisors are not linearly equivalent");
  return m;
}

namespace {

// Quasistable pseudo-divisors supported on one edge subset (given as a mask).
std::vector<PseudoDivisor> enumerate_for_subset(const Graph& g, Index v0, const Polarization& mu, std::int64_t d,
                                                std::uint64_t edge_mask) {
  const std::size_t n = g.num_vertices();
  EdgeSet edges;
  for (Index e = 0; e < g.num_edges(); ++e)
    if ((edge_mask >> e) & 1u) edges.push_back(e);

  // Γ^E topology without building string ids: mids are n, n+1, ...
  kernels::BetaProblem p;
  p.n = n + edges.size();
  p.root = v0;
  std::size_t next_mid = n;
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if ((edge_mask >> e) & 1u) {
      p.edges.emplace_back(ed.src, next_mid);
      p.edges.emplace_back(next_mid, ed.dst);
      ++next_mid;
    } else if (!ed.is_loop()) {
      p.edges.emplace_back(ed.src, ed.dst);
    }
  }
  const std::int64_t l = mu.common_denominator();
  p.cut_weight = l;
  p.weight.assign(p.n, 0);
  for (Index x = n; x < p.n; ++x) p.weight[x] = -2 * l;

  std::vector<std::int64_t> valence(p.n, 0);
  for (auto [a, b] : p.edges) {
    ++valence[a];
    ++valence[b];
  }
  // Bounds from β({v}) >= 0 (> 0 at v0) and β({v}) <= δ_v (< δ_v away from v0),
  // in units of 1/(2L): 2L·D(v) ∈ [2Lµ(v) − Lδ_v, 2Lµ(v) + Lδ_v].
  std::vector<std::int64_t> lo(n), hi(n);
  const std::int64_t target = d + static_cast<std::int64_t>(edges.size());
  if (p.n == 1) {
    lo[0] = hi[0] = target;
  } else {
    for (Index v = 0; v < n; ++v) {
      std::int64_t two_l_mu = to_int64_exact(mu.values[v] * (2 * l));
      std::int64_t low = two_l_mu - l * valence[v];
      std::int64_t high = two_l_mu + l * valence[v];
      auto floor_div = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
      std::int64_t lo_v = -floor_div(-low, 2 * l);  // ceil
      std::int64_t hi_v = floor_div(high, 2 * l);
      if (v == v0 && lo_v * 2 * l == low) ++lo_v;
      if (v != v0 && hi_v * 2 * l == high) --hi_v;
      lo[v] = lo_v;
      hi[v] = hi_v;
    }
  }
  std::vector<std::int64_t> suffix_lo(n + 1, 0), suffix_hi(n + 1, 0);
  for (Index v = n; v-- > 0;) {
    suffix_lo[v] = suffix_lo[v + 1] + lo[v];
    suffix_hi[v] = suffix_hi[v + 1] + hi[v];
  }

  std::vector<PseudoDivisor> out;
  Divisor base(n);
  auto recurse = [&](auto&& self, Index v, std::int64_t remaining) -> void {
    if (v == n) {
      if (remaining != 0) return;
      for (Index x = 0; x < n; ++x) p.weight[x] = 2 * l * base[x] - to_int64_exact(mu.values[x] * (2 * l));
      if (kernels::no_violator(p)) out.push_back(PseudoDivisor{edges, base});
      return;
    }
    for (std::int64_t val = lo[v]; val <= hi[v]; ++val) {
      std::int64_t rest = remaining - val;
      if (rest < suffix_lo[v + 1] || rest > suffix_hi[v + 1]) continue;
      base[v] = val;
      self(self, v + 1, rest);
    }
  };
  recurse(recurse, 0, target);
  return out;
}

void check_enumeration_input(const Graph& g, const Polarization& mu, std::int64_t d) {
  if (mu.degree != d) throw InputError("polarization degree differs from requested degree");
  if (g.num_edges() > 30) throw InputError("enumerate_quasistable is limited to 30 edges");
}

}  // namespace

std::vector<PseudoDivisor> enumerate_quasistable(const Graph& g, Index v0, const Polarization& mu, std::int64_t d) {
  check_enumeration_input(g, mu, d);
  const auto subsets = static_cast<std::int64_t>(std::uint64_t{1} << g.num_edges());
  std::vector<std::vector<PseudoDivisor>> per_subset(static_cast<std::size_t>(subsets));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t m = 0; m < subsets; ++m)
    per_subset[static_cast<std::size_t>(m)] = enumerate_for_subset(g, v0, mu, d, static_cast<std::uint64_t>(m));
  std::vector<PseudoDivisor> all;
  for (auto& part : per_subset)
    for (auto& pd : part) all.push_back(std::move(pd));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<PseudoDivisor> enumerate_quasistable_serial(const Graph& g, Index v0, const Polarization& mu,
                                                        std::int64_t d) {
  check_enumeration_input(g, mu, d);
  std::vector<PseudoDivisor> all;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.num_edges()); ++m) {
    auto part = enumerate_for_subset(g, v0, mu, d, m);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace tropabel
