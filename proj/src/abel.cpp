#include "tropabel/abel.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "tropabel/error.hpp"
#include "tropabel/kernels.hpp"

namespace tropabel {

std::int64_t HypercubeSpec::multiplicity(Index e) const {
  return static_cast<std::int64_t>(std::count(f.begin(), f.end(), e));
}

// --- labels -------------------------------------------------------------------

std::size_t q_label(const VertexPoint& q) {
  const std::size_t d = q.bits.size();
  if (d == 0) return 1;
  std::size_t gray = 0;
  for (std::size_t k = 0; k + 1 < d; ++k)
    if (q.bits[k]) gray |= std::size_t{1} << k;
  std::size_t rank = gray;
  for (std::size_t shift = 1; shift < 64; shift <<= 1) rank ^= rank >> shift;
  return (q.bits[d - 1] ? std::size_t{1} << (d - 1) : 0) + rank + 1;
}

VertexPoint from_label(std::size_t d, std::size_t label) {
  if (d == 0 || label < 1 || label > (std::size_t{1} << d)) throw InputError("vertex label out of range");
  const std::size_t idx = label - 1;
  const std::size_t half = std::size_t{1} << (d - 1);
  const std::size_t rank = idx % half;
  const std::size_t gray = rank ^ (rank >> 1);
  VertexPoint q{std::vector<int>(d, 0)};
  for (std::size_t k = 0; k + 1 < d; ++k) q.bits[k] = static_cast<int>((gray >> k) & 1);
  q.bits[d - 1] = idx >= half ? 1 : 0;
  return q;
}

std::string q_name(const VertexPoint& q) { return "Q" + std::to_string(q_label(q)); }

toric::LatticeSimplex lattice_simplex(const Simplex& s) {
  toric::LatticeSimplex out;
  for (const auto& q : s) out.emplace_back(q.bits.begin(), q.bits.end());
  return out;
}

// --- setup and vertex invariants -------------------------------------------------

AbelSetup::AbelSetup(Graph g_, Index v0_, Polarization mu_, Divisor dref_, HypercubeSpec spec_)
    : g(std::move(g_)), v0(v0_), mu(std::move(mu_)), dref(std::move(dref_)), spec(std::move(spec_)) {
  if (v0 >= g.num_vertices()) throw InputError("root is not a vertex");
  if (dref.size() != g.num_vertices()) throw InputError("reference divisor size does not match the graph");
  if (spec.f.empty()) throw InputError("hypercube needs at least one coordinate");
  for (Index e : spec.f)
    if (e >= g.num_edges()) throw InputError("hypercube coordinate is not an edge");
  const auto d = static_cast<std::int64_t>(spec.d());
  if (dref.degree() != mu.degree + d)
    throw InputError("reference divisor must have degree deg(mu) + d = " + std::to_string(mu.degree + d));
}

Index AbelSetup::vertex(const VertexPoint& q, std::size_t k) const {
  const Edge& e = g.edge(spec.f[k]);
  return q.bits[k] ? e.dst : e.src;
}

namespace {

void check_point(const AbelSetup& s, const VertexPoint& q) {
  if (q.bits.size() != s.spec.d()) throw InputError("vertex point has the wrong dimension");
}

}  // namespace

Divisor div_of_vertex(const AbelSetup& s, const VertexPoint& q) {
  check_point(s, q);
  Divisor d(s.g.num_vertices());
  for (std::size_t k = 0; k < s.spec.d(); ++k) d[s.vertex(q, k)] -= 1;
  return d;
}

Divisor abel_vertex(const AbelSetup& s, const VertexPoint& q) {
  return qs_reduce(s.g, s.v0, s.mu, s.dref + div_of_vertex(s, q)).divisor;
}

std::int64_t a_invariant(const AbelSetup& s, Index e, const VertexPoint& q, Index v) {
  check_point(s, q);
  std::int64_t a = 0;
  for (std::size_t k = 0; k < s.spec.d(); ++k)
    if (s.spec.f[k] == e && s.vertex(q, k) == v) ++a;
  return a;
}

std::int64_t a_invariant(const AbelSetup& s, Index e, const VertexPoint& q, const VertexSet& w) {
  check_point(s, q);
  std::int64_t a = 0;
  for (std::size_t k = 0; k < s.spec.d(); ++k)
    if (s.spec.f[k] == e && !std::binary_search(w.begin(), w.end(), s.vertex(q, k))) ++a;
  return a;
}

OneChain b_flow(const AbelSetup& s, const VertexPoint& q) {
  const Divisor d = s.dref + div_of_vertex(s, q);
  const Divisor reduced = qs_reduce(s.g, s.v0, s.mu, d).divisor;
  return delta(s.g, laplacian_potential(s.g, s.v0, d, reduced));
}

std::int64_t b_invariant(const AbelSetup& s, Index e, const VertexPoint& q) { return b_flow(s, q)[e]; }

namespace {

std::int64_t signed_b(const Graph& g, Index e, std::int64_t b, const VertexSet& w) {
  const bool src_in = std::binary_search(w.begin(), w.end(), g.edge(e).src);
  const bool dst_in = std::binary_search(w.begin(), w.end(), g.edge(e).dst);
  if (dst_in && !src_in) return b;
  if (!dst_in && src_in) return -b;
  return 0;
}

}  // namespace

std::int64_t b_invariant(const AbelSetup& s, Index e, const VertexPoint& q, const VertexSet& w) {
  return signed_b(s.g, e, b_invariant(s, e, q), w);
}

// --- points of a simplex ---------------------------------------------------------

SimplexPoint point_of_simplex(const AbelSetup& s, const Simplex& simplex, const ConvexTuple& t) {
  if (simplex.empty()) throw InputError("empty simplex");
  for (const auto& q : simplex) check_point(s, q);
  const std::size_t n = simplex.size() - 1;
  if (t.n() != n) throw InputError("convex tuple length must equal the simplex dimension");
  SimplexPoint out;
  for (std::size_t i = 0; i < s.spec.d(); ++i) {
    const bool far = simplex[0].bits[i] == 1;
    std::vector<int> members;
    if (far) members.push_back(-1);
    for (std::size_t j = 1; j <= n; ++j)
      if ((simplex[n - j + 1].bits[i] == 1) != far) members.push_back(static_cast<int>(j));
    IndexSet jset(std::move(members));
    out.coords.push_back(d_of(jset, t));
    out.coeffs[{s.spec.f[i], jset}] -= 1;
    out.j.push_back(std::move(jset));
  }
  out.divisor = coefficient_divisor(s.g, out.coeffs, t);
  return out;
}

std::vector<ConvexTuple> standard_samples(std::size_t n) {
  if (n == 0) return {ConvexTuple(std::vector<Rational>{})};
  static const std::int64_t small_primes[] = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61};
  static const std::int64_t mid_primes[] = {101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167};
  static const std::int64_t large_primes[] = {1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049,
                                              1051, 1061, 1063, 1069, 1087, 1091, 1093, 1097};
  if (n >= std::size(mid_primes)) throw InputError("simplex dimension too large for the sampler");
  std::vector<ConvexTuple> out;

  // Generic: distinct prime denominators, halved until the sum fits.
  std::int64_t scale = 1;
  while (true) {
    Rational sum = 0;
    for (std::size_t j = 0; j < n; ++j) sum += make_rational(1, small_primes[j] * scale);
    if (sum < 1) break;
    scale *= 2;
  }
  std::vector<Rational> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = make_rational(1, small_primes[j] * scale);
  out.emplace_back(t);

  // Near the barycenter.
  for (std::size_t j = 0; j < n; ++j)
    t[j] = make_rational(1, static_cast<std::int64_t>(n + 1)) - make_rational(1, mid_primes[j]);
  out.emplace_back(t);

  // Near each vertex: vertex 0 is t = 0, vertex n−i+1 is the unit tuple e_i.
  for (std::size_t i = 0; i <= n; ++i) {
    Rational rest = 1;
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i) continue;
      t[j - 1] = make_rational(1, large_primes[j]);
      rest -= t[j - 1];
    }
    if (i > 0) t[i - 1] = rest - make_rational(1, large_primes[0]);
    out.emplace_back(t);
  }
  return out;
}

namespace {

std::vector<ConvexTuple> random_samples(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(1, 1'000'000);
  std::vector<ConvexTuple> out;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::int64_t> parts(n + 1);
    for (auto& p : parts) p = pick(rng);
    const std::int64_t total = std::accumulate(parts.begin(), parts.end(), std::int64_t{0});
    std::vector<Rational> t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = make_rational(parts[j], total);
    out.emplace_back(std::move(t));
  }
  return out;
}

}  // namespace

CellResult cell_of_simplex(const AbelSetup& s, const Simplex& simplex, const CellOptions& opt) {
  if (simplex.empty()) throw InputError("empty simplex");
  const std::size_t n = simplex.size() - 1;
  CellResult out;
  out.samples = standard_samples(n);
  for (auto& t : random_samples(n, opt.extra_samples, opt.seed)) out.samples.push_back(std::move(t));

  TropicalReducer reducer(s.g, s.v0, s.mu, opt.route);
  const TropicalDivisor base(s.g, s.dref);
  std::map<Index, std::vector<Rational>> observed;
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    SimplexPoint p = point_of_simplex(s, simplex, out.samples[k]);
    TropicalReduction red = reducer.reduce(base + p.divisor);
    if (k == 0) {
      out.type = red.type;
    } else if (red.type != out.type) {
      out.reason = "samples land in different cells";
      return out;
    }
    for (std::size_t i = 0; i < red.type.edges.size(); ++i) observed[red.type.edges[i]].push_back(red.positions[i]);
  }

  // I_e: the unique subset of {−1,1..n} whose d_I reproduces every sample.
  const std::size_t subsets = std::size_t{1} << (n + 1);
  for (Index e : out.type.edges) {
    std::vector<IndexSet> matches;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<int> members;
      if (mask & 1) members.push_back(-1);
      for (std::size_t j = 1; j <= n; ++j)
        if ((mask >> j) & 1) members.push_back(static_cast<int>(j));
      IndexSet iset(std::move(members));
      bool all = true;
      for (std::size_t k = 0; k < out.samples.size() && all; ++k)
        all = d_of(iset, out.samples[k]) == observed[e][k];
      if (all) matches.push_back(std::move(iset));
    }
    if (matches.size() != 1) {
      out.reason = matches.empty() ? "point on " + s.g.edge(e).id + " does not move affinely"
                                   : "ambiguous position on " + s.g.edge(e).id;
      return out;
    }
    out.positions.emplace(e, std::move(matches.front()));
  }
  out.consistent = true;
  return out;
}

// --- local conditions --------------------------------------------------------------

namespace {

struct VertexData {
  std::vector<std::vector<std::int64_t>> a_target;  // [i][e] = a^e_{Q_i}(t(e))
  std::vector<OneChain> b;                          // [i]
};

VertexData vertex_data(const AbelSetup& s, const Simplex& simplex) {
  VertexData vd;
  for (const auto& q : simplex) {
    std::vector<std::int64_t> row(s.g.num_edges());
    for (Index e = 0; e < s.g.num_edges(); ++e) row[e] = a_invariant(s, e, q, s.g.edge(e).dst);
    vd.a_target.push_back(std::move(row));
    vd.b.push_back(b_flow(s, q));
  }
  return vd;
}

std::vector<Cond1Violation> condition1(const AbelSetup& s, const VertexData& vd) {
  std::vector<Cond1Violation> out;
  const std::size_t m = vd.b.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (Index e = 0; e < s.g.num_edges(); ++e) {
        std::int64_t diff = (vd.a_target[i][e] + vd.b[i][e]) - (vd.a_target[j][e] + vd.b[j][e]);
        if (diff > 1 || diff < -1) out.push_back({i, j, e, diff});
      }
  return out;
}

// Rows: proper W ∋ v0, in increasing mask order over the other vertices.
struct Cond2Rows {
  std::vector<VertexSet> w;
  kernels::SeparableSweep sweep;
};

Cond2Rows condition2_rows(const AbelSetup& s, const Simplex& simplex, const VertexData& vd) {
  const Graph& g = s.g;
  const std::size_t nv = g.num_vertices();
  const std::int64_t l = s.mu.common_denominator();
  const auto d = static_cast<std::int64_t>(s.spec.d());
  Cond2Rows rows;
  rows.sweep.edges = g.num_edges();
  rows.sweep.choices = simplex.size();
  std::vector<Index> others;
  for (Index v = 0; v < nv; ++v)
    if (v != s.v0) others.push_back(v);
  const std::uint64_t count = std::uint64_t{1} << others.size();
  for (std::uint64_t mask = 0; mask + 1 < count; ++mask) {
    VertexSet w{s.v0};
    for (std::size_t k = 0; k < others.size(); ++k)
      if ((mask >> k) & 1) w.push_back(others[k]);
    std::sort(w.begin(), w.end());
    std::int64_t deg_w = 0;
    for (Index v : w) deg_w += s.dref[v];
    const std::int64_t cut_size = cut(g, w).size;
    rows.sweep.base.push_back(2 * l * (deg_w - d) - to_int64_exact(s.mu.of(w) * (2 * l)));
    rows.sweep.lo.push_back(-l * cut_size);
    rows.sweep.hi.push_back(l * cut_size);
    std::vector<std::vector<std::int64_t>> term(g.num_edges(), std::vector<std::int64_t>(simplex.size()));
    for (Index e = 0; e < g.num_edges(); ++e)
      for (std::size_t c = 0; c < simplex.size(); ++c)
        term[e][c] = 2 * l * (a_invariant(s, e, simplex[c], w) - signed_b(g, e, vd.b[c][e], w));
    rows.sweep.term.push_back(std::move(term));
    rows.w.push_back(std::move(w));
  }
  return rows;
}

bool exhaustive_feasible(std::size_t choices, std::size_t edges) {
  std::uint64_t total = 1;
  for (std::size_t e = 0; e < edges; ++e) {
    total *= choices;
    if (total > kCond2ExhaustiveLimit) return false;
  }
  return true;
}

}  // namespace

ConditionReport check_conditions_exhaustive(const AbelSetup& s, const Simplex& simplex, bool parallel) {
  VertexData vd = vertex_data(s, simplex);
  ConditionReport r;
  r.cond1 = condition1(s, vd);
  r.cond2_method = "exhaustive";
  Cond2Rows rows = condition2_rows(s, simplex, vd);
  auto counts = parallel ? kernels::sweep_parallel(rows.sweep) : kernels::sweep_serial(rows.sweep);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) r.cond2.push_back({rows.w[i], counts[i]});
  return r;
}

ConditionReport check_conditions_separable(const AbelSetup& s, const Simplex& simplex) {
  VertexData vd = vertex_data(s, simplex);
  ConditionReport r;
  r.cond1 = condition1(s, vd);
  r.cond2_method = "separable";
  Cond2Rows rows = condition2_rows(s, simplex, vd);
  const auto& sw = rows.sweep;
  for (std::size_t i = 0; i < rows.w.size(); ++i) {
    std::int64_t lo = sw.base[i], hi = sw.base[i];
    for (std::size_t e = 0; e < sw.edges; ++e) {
      const auto& t = sw.term[i][e];
      lo += *std::min_element(t.begin(), t.end());
      hi += *std::max_element(t.begin(), t.end());
    }
    if (lo <= sw.lo[i] || hi > sw.hi[i]) r.cond2.push_back({rows.w[i], 1});
  }
  return r;
}

ConditionReport check_conditions(const AbelSetup& s, const Simplex& simplex) {
  if (simplex.empty()) throw InputError("empty simplex");
  return exhaustive_feasible(simplex.size(), s.g.num_edges()) ? check_conditions_exhaustive(s, simplex)
                                                               : check_conditions_separable(s, simplex);
}

// --- triangulations and certificates -------------------------------------------------

std::vector<Simplex> staircase_triangulation(const HypercubeSpec& spec) {
  const std::size_t d = spec.d();
  if (d == 0) throw InputError("hypercube needs at least one coordinate");
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Simplex> out;
  do {
    Simplex s;
    VertexPoint q{std::vector<int>(d, 0)};
    s.push_back(q);
    for (std::size_t k : perm) {
      q.bits[k] = 1;
      s.push_back(q);
    }
    out.push_back(std::move(s));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool Certificate::compatible() const {
  if (entries.empty() || volume_sum != 1) return false;
  return std::all_of(entries.begin(), entries.end(), [](const CertificateEntry& e) { return e.pass(); });
}

Certificate certify_compatibility(const AbelSetup& s, const std::vector<Simplex>& triangulation,
                                  const CellOptions& opt) {
  Certificate cert;
  cert.volume_sum = 0;
  const std::size_t d = s.spec.d();
  Rational unit = 1;
  for (std::size_t k = 2; k <= d; ++k) unit /= static_cast<long>(k);
  for (const auto& simplex : triangulation) {
    CertificateEntry entry;
    entry.simplex = simplex;
    entry.volume = 0;
    try {
      entry.volume = toric::simplex_volume(lattice_simplex(simplex));
      entry.unimodular = entry.volume == unit;
    } catch (const Degenerate&) {
      entry.unimodular = false;
    }
    cert.volume_sum += entry.volume;
    entry.cell = cell_of_simplex(s, simplex, opt);
    entry.conditions = check_conditions(s, simplex);
    cert.entries.push_back(std::move(entry));
  }
  return cert;
}

// --- degree 1 ---------------------------------------------------------------------------

Degree1Result degree1_cell(const Graph& g, Index v0, const Polarization& mu, const Divisor& dref, Index e0,
                           VbarRule rule) {
  if (e0 >= g.num_edges()) throw InputError("e0 is not an edge");
  if (dref.degree() != mu.degree + 1) throw InputError("reference divisor must have degree deg(mu) + 1");
  const Index src = g.edge(e0).src;
  Polarization sharp = mu;
  sharp.values[src] += 1;
  sharp.degree += 1;

  Degree1Result out;
  out.reduced = qs_reduce(g, v0, sharp, dref).divisor;
  PseudoDivisor flat{{e0}, out.reduced};
  if (is_quasistable_pseudo(g, v0, mu, flat).quasistable) {
    out.cell = flat;
    out.flat_branch = true;
    return out;
  }

  Subdivision sub = subdivide_edges(g, {e0});
  kernels::BetaProblem p =
      make_beta_problem(sub.refined, sub.vertex_map[v0], induced_polarization(sub, mu), expand(sub, flat));
  const Index mid = sub.chain_vertices[e0][1];
  const Index avoid = sub.vertex_map[src];
  kernels::Candidate vbar = kernels::minimizer_avoiding(p, avoid);
  const bool has_mid = std::binary_search(vbar.set.begin(), vbar.set.end(), mid);
  ensure(has_mid && std::binary_search(vbar.set.begin(), vbar.set.end(), sub.vertex_map[g.edge(e0).dst]),
         "maximal minimizer misses t(e0) or the exceptional vertex on " + g.edge(e0).id);
  if (rule == VbarRule::LeastWitness) {
    VertexSet required{mid, sub.vertex_map[g.edge(e0).dst]};
    if (std::binary_search(vbar.set.begin(), vbar.set.end(), sub.vertex_map[v0])) required.push_back(sub.vertex_map[v0]);
    std::sort(required.begin(), required.end());
    required.erase(std::unique(required.begin(), required.end()), required.end());
    kernels::Candidate least = kernels::least_minimizer(p, required, avoid);
    ensure(least.value == vbar.value, "no minimizer contains the required vertices on " + g.edge(e0).id);
    vbar = std::move(least);
  }
  std::vector<bool> in_vbar(sub.refined.num_vertices(), false);
  for (Index x : vbar.set) in_vbar[x] = true;
  for (Index v = 0; v < g.num_vertices(); ++v)
    if (in_vbar[sub.vertex_map[v]]) out.vbar_on_graph.push_back(v);

  EdgeSet tilde;
  for (Index e : cut(g, out.vbar_on_graph).edges)
    if (e != e0) tilde.push_back(e);
  Divisor base = out.reduced;
  base[src] -= 1;
  std::vector<bool> in_v = indicator(g, out.vbar_on_graph);
  for (Index e : tilde) {
    const Edge& ed = g.edge(e);
    if (in_v[ed.src]) base[ed.src] += 1;
    if (in_v[ed.dst]) base[ed.dst] += 1;
  }
  out.cell = PseudoDivisor{tilde, base};
  ensure(is_quasistable_pseudo(g, v0, mu, out.cell).quasistable,
         "degree-1 cell (E~, D~) is not quasistable for edge " + g.edge(e0).id);
  return out;
}

std::vector<Rational> degree1_interior_mismatches(const Graph& g, Index v0, const Polarization& mu,
                                                  const Divisor& dref, Index e0, const PseudoDivisor& expected,
                                                  const std::vector<Rational>& positions) {
  TropicalReducer reducer(g, v0, mu);
  std::vector<Rational> bad;
  for (const auto& r : positions) {
    if (r <= 0 || r >= 1) throw InputError("interior positions must lie in (0,1)");
    TropicalDivisor d(g, dref);
    d.add_point(g, e0, r, -1);
    if (reducer.reduce(d).type != expected) bad.push_back(r);
  }
  return bad;
}

InjectivityReport degree1_injectivity(const Graph& g, Index v0, const Polarization& mu, const Divisor& dref) {
  InjectivityReport r;
  r.applicable = is_biconnected(g);
  if (!r.applicable) return r;
  for (Index v = 0; v < g.num_vertices(); ++v) {
    r.labels.push_back(g.vertex_id(v));
    r.images.push_back(PseudoDivisor{{}, qs_reduce(g, v0, mu, dref - g.unit(v)).divisor});
  }
  for (Index e = 0; e < g.num_edges(); ++e) {
    r.labels.push_back(g.edge(e).id);
    r.images.push_back(degree1_cell(g, v0, mu, dref, e).cell);
  }
  for (std::size_t i = 0; i < r.images.size(); ++i)
    for (std::size_t j = i + 1; j < r.images.size(); ++j)
      if (r.images[i] == r.images[j]) r.collisions.emplace_back(r.labels[i], r.labels[j]);
  return r;
}

}  // namespace tropabel
