#include "tropabel/selftest.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tropabel/abel.hpp"
#include "tropabel/error.hpp"
#include "tropabel/generators.hpp"
#include "tropabel/jacobian.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/toric.hpp"
#include "tropabel/tropical.hpp"

namespace tropabel {

namespace examples {

Graph two_edge_graph() { return Graph({"u", "v"}, {{"e1", "u", "v"}, {"e2", "u", "v"}}, "u"); }

Graph theta_graph() { return Graph({"u", "v"}, {{"e1", "u", "v"}, {"e2", "u", "v"}, {"e3", "u", "v"}}, "u"); }

Graph casquinha_graph() {
  return Graph({"v1", "v2", "v3"},
               {{"e1", "v1", "v3"}, {"e2", "v2", "v1"}, {"e3", "v2", "v3"}, {"e4", "v2", "v3"}}, "v3");
}

}  // namespace examples

bool SelftestReport::ok() const {
  return std::all_of(cases.begin(), cases.end(), [](const SelftestCase& c) { return c.passed; });
}

namespace {

// Each check returns an empty string on success, otherwise the first failure.
using Check = std::function<std::string()>;

std::string expect(bool cond, const std::string& what) { return cond ? std::string{} : what; }

Divisor divisor_of(const Graph& g, std::initializer_list<std::pair<const char*, std::int64_t>> entries) {
  Divisor d(g.num_vertices());
  for (const auto& [id, w] : entries) d[g.vertex_index(id)] = w;
  return d;
}

std::string golden_two_edge() {
  const Graph g = examples::two_edge_graph();
  const Index u = g.vertex_index("u");
  const Polarization mu = Polarization::zero(g);
  if (qs_reduce(g, u, mu, divisor_of(g, {{"u", 3}, {"v", -3}})).divisor != divisor_of(g, {{"u", 1}, {"v", -1}}))
    return "qs(3u-3v) != u-v";
  const AbelSetup s(g, u, mu, divisor_of(g, {{"u", 5}, {"v", -3}}), HypercubeSpec{{0, 1}});
  const VertexPoint q0{{0, 0}};
  const Index e1 = g.edge_index("e1"), e2 = g.edge_index("e2");
  const VertexSet w{u};
  if (auto m = expect(abel_vertex(s, q0) == divisor_of(g, {{"u", 1}, {"v", -1}}), "qs(D+div Q0) != u-v"); !m.empty())
    return m;
  if (b_invariant(s, e1, q0) != -1 || b_invariant(s, e2, q0) != -1) return "b^e(Q0) != -1";
  if (b_invariant(s, e1, q0, w) != 1) return "b^e1(W) != 1";
  if (a_invariant(s, e1, q0, u) != 1 || a_invariant(s, e1, q0, g.vertex_index("v")) != 0 ||
      a_invariant(s, e2, q0, u) != 1)
    return "a-invariants at Q0";
  return expect(a_invariant(s, e1, q0, w) == 0, "a^e1(W) != 0");
}

std::string golden_theta_jacobian() {
  const Graph g = examples::theta_graph();
  const JacobianComplex j = build_jacobian(g, g.vertex_index("u"), Polarization::zero(g), 0);
  if (j.cells.size() != 12) return "expected 12 cells, got " + std::to_string(j.cells.size());
  if (j.f_vector() != std::vector<std::size_t>{3, 6, 3}) return "f-vector != (3,6,3)";
  if (euler_characteristic(j) != 0) return "Euler characteristic != 0";
  return expect(Integer(static_cast<long>(j.f_vector().back())) == spanning_tree_count(g),
                "maximal cells != spanning trees");
}

std::string golden_casquinha() {
  const Graph g = examples::casquinha_graph();
  const HypercubeSpec spec{{g.edge_index("e4"), g.edge_index("e3"), g.edge_index("e2")}};
  const std::vector<Simplex> tri = staircase_triangulation(spec);
  std::set<std::set<std::size_t>> got, want{{1, 2, 3, 7}, {1, 4, 8, 7}, {1, 5, 6, 7},
                                            {1, 4, 3, 7}, {1, 5, 8, 7}, {1, 2, 6, 7}};
  for (const auto& s : tri) {
    std::set<std::size_t> labels;
    for (const auto& q : s) labels.insert(q_label(q));
    got.insert(labels);
  }
  if (tri.size() != 6 || got != want) return "staircase simplices differ from S_1..S_6";
  const AbelSetup setup(g, g.vertex_index("v3"), Polarization::zero(g), divisor_of(g, {{"v3", 3}}), spec);
  const Certificate cert = certify_compatibility(setup, tri);
  for (const auto& e : cert.entries)
    if (e.volume != make_rational(1, 6)) return "simplex volume != 1/6";
  return expect(cert.compatible(), "certificate is not compatible");
}

std::string beta_additivity(gen::Rng& rng) {
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = gen::random_graph(rng);
    const Polarization mu = gen::random_polarization(g, rng, 0);
    const Divisor d = gen::random_divisor(g, rng, 0);
    const std::size_t n = g.num_vertices();
    auto subset = [&](std::uint64_t mask) {
      VertexSet s;
      for (Index v = 0; v < n; ++v)
        if ((mask >> v) & 1) s.push_back(v);
      return s;
    };
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
    const std::uint64_t a = pick(rng), b = pick(rng);
    const VertexSet v = subset(a), w = subset(b), vw_union = subset(a | b), vw_meet = subset(a & b);
    std::int64_t between = 0;
    for (const auto& e : g.edges()) {
      const bool s_only_v = ((a >> e.src) & 1) && !((b >> e.src) & 1);
      const bool s_only_w = ((b >> e.src) & 1) && !((a >> e.src) & 1);
      const bool t_only_v = ((a >> e.dst) & 1) && !((b >> e.dst) & 1);
      const bool t_only_w = ((b >> e.dst) & 1) && !((a >> e.dst) & 1);
      if ((s_only_v && t_only_w) || (s_only_w && t_only_v)) ++between;
    }
    if (beta(g, mu, d, vw_union) + beta(g, mu, d, vw_meet) != beta(g, mu, d, v) + beta(g, mu, d, w) - between)
      return "beta(V∪W) + beta(V∩W) != beta(V) + beta(W) - |E(V∖W, W∖V)|";
    if (beta(g, mu, d, v) + beta(g, mu, d, subset(~a & ((std::uint64_t{1} << n) - 1))) != cut(g, v).size)
      return "beta(V) + beta(V^c) != cut size";
  }
  return {};
}

std::string uniqueness(gen::Rng& rng) {
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = gen::random_graph(rng, {1, 5, 7, true});
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-2, 2)(rng);
    const Polarization mu = gen::random_polarization(g, rng, k);
    const Divisor d = gen::random_divisor(g, rng, k);
    const QsReduction red = qs_reduce(g, g.root(), mu, d);
    std::int64_t bound = 2;
    for (Index v = 0; v < g.num_vertices(); ++v) bound = std::max(bound, std::abs(red.potential[v]) + 1);
    if (qs_reduce_oracle(g, g.root(), mu, d, bound).divisor != red.divisor) return "qs_reduce != oracle";
    if (qs_reduce(g, g.root(), mu, red.divisor).divisor != red.divisor) return "qs_reduce not idempotent";
    ZeroChain m(g.num_vertices());
    for (Index v = 0; v < g.num_vertices(); ++v) m[v] = std::uniform_int_distribution<std::int64_t>(-2, 2)(rng);
    if (qs_reduce(g, g.root(), mu, d + laplacian(g, m)).divisor != red.divisor) return "qs_reduce not class-constant";
  }
  return {};
}

std::map<Rational, std::int64_t> merged(const std::vector<std::pair<Rational, std::int64_t>>& pts) {
  std::map<Rational, std::int64_t> out;
  for (const auto& [r, w] : pts) out[r] += w;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::string organize_suite(gen::Rng& rng) {
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    std::int64_t a = std::uniform_int_distribution<std::int64_t>(-3, 3)(rng);
    if (a == 0) a = 1;
    const IndexSet i = gen::random_index_set(rng, n);
    const AdmissibleSequence seq = organize_segment(a, i, n);
    if (!seq.is_admissible()) return "organize_segment output is not admissible";
    auto points = [&](const ConvexTuple& t) {
      std::vector<std::pair<Rational, std::int64_t>> original{{d_of(i, t), a}}, organized;
      for (std::size_t j = 0; j <= n + 1; ++j) organized.emplace_back(t.r(j), seq.a[j]);
      return std::pair{original, organized};
    };
    const ConvexTuple t = gen::random_convex_tuple(rng, n);
    auto [orig, org] = points(t);
    std::vector<std::pair<Rational, std::int64_t>> diff = orig;
    for (const auto& [r, w] : org) diff.emplace_back(r, -w);
    if (!segment_principality(diff).equal_endpoints()) return "organized divisor not equivalent with equal endpoints";
    for (std::size_t k = 0; k <= n; ++k) {
      std::vector<Rational> corner(n, 0);
      if (k > 0) corner[k - 1] = 1;
      auto [o, z] = points(ConvexTuple(corner));
      if (merged(o) != merged(z)) return "degenerate tuple does not specialize to an equality";
    }
  }
  return {};
}

AbelSetup random_abel_setup(gen::Rng& rng, std::size_t max_d) {
  const Graph g = gen::random_graph(rng, {2, 4, 6, true});
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, max_d)(rng);
  const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-1, 1)(rng);
  const Polarization mu = gen::random_polarization(g, rng, k);
  const Divisor dref = gen::random_divisor(g, rng, k + static_cast<std::int64_t>(d), 2);
  const HypercubeSpec spec = gen::random_spec(g, rng, d);
  return AbelSetup(g, g.root(), mu, dref, spec);
}

std::string conditions_suite(gen::Rng& rng) {
  int successes = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const AbelSetup s = random_abel_setup(rng, 3);
    const Simplex simplex = gen::random_simplex(rng, s.spec.d());
    if (!cell_of_simplex(s, simplex).consistent) continue;
    ++successes;
    const ConditionReport r = check_conditions(s, simplex);
    if (!r.ok()) return "conditions violated on a cell-contained simplex";
  }
  return expect(successes > 0, "no simplex was cell-contained");
}

std::string degree1_suite(gen::Rng& rng) {
  const std::vector<Rational> interior{make_rational(1, 7), make_rational(1, 2), make_rational(5, 6)};
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = trial % 2 ? gen::random_biconnected_graph(rng, 4, 6) : gen::random_graph(rng, {2, 4, 6, true});
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-1, 1)(rng);
    const Polarization mu = gen::random_polarization(g, rng, k);
    const Divisor dref = gen::random_divisor(g, rng, k + 1, 2);
    for (Index e = 0; e < g.num_edges(); ++e) {
      const Degree1Result r = degree1_cell(g, g.root(), mu, dref, e);
      if (!degree1_interior_mismatches(g, g.root(), mu, dref, e, r.cell, interior).empty())
        return "interior point of " + g.edge(e).id + " reduces outside the degree-1 cell";
    }
    const InjectivityReport inj = degree1_injectivity(g, g.root(), mu, dref);
    if (inj.applicable && !inj.injective()) return "degree-1 map not injective on a biconnected graph";
  }
  return {};
}

std::string toric_suite() {
  for (std::size_t d = 1; d <= 4; ++d) {
    HypercubeSpec spec{std::vector<Index>(d, 0)};
    std::vector<toric::LatticeSimplex> tri;
    Rational total = 0;
    for (const auto& s : staircase_triangulation(spec)) {
      tri.push_back(lattice_simplex(s));
      total += toric::simplex_volume(tri.back());
    }
    if (total != 1) return "volumes do not sum to 1";
    for (const auto& c : toric::blowup_charts(tri)) {
      for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t j = 0; j <= d; ++j) {
          std::int64_t pairing = c.u[i][d];
          for (std::size_t k = 0; k < d; ++k) pairing += c.u[i][k] * c.vertices[j][k];
          if (pairing != (i == j ? 1 : 0)) return "chart is not dual to its simplex";
        }
    }
    const toric::ConePresentation p = toric::hypercube_cone_presentation(d);
    if (p.generators.size() != 2 * d || p.relations.size() != d * (d - 1) / 2) return "cone presentation counts";
  }
  return {};
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed) {
  gen::Rng rng(seed);
  const std::vector<std::pair<std::string, Check>> checks{
      {"golden: two-edge graph qs, a and b invariants", golden_two_edge},
      {"golden: theta graph Jacobian", golden_theta_jacobian},
      {"golden: three-vertex example staircase and certificate", golden_casquinha},
      {"suite: beta additivity", [&] { return beta_additivity(rng); }},
      {"suite: reduction uniqueness and idempotence", [&] { return uniqueness(rng); }},
      {"suite: organized segments", [&] { return organize_suite(rng); }},
      {"suite: local conditions on cell-contained simplices", [&] { return conditions_suite(rng); }},
      {"suite: degree-1 totality and injectivity", [&] { return degree1_suite(rng); }},
      {"suite: toric charts up to d=4", toric_suite},
  };
  SelftestReport report;
  for (const auto& [name, check] : checks) {
    SelftestCase c{name, false, {}};
    try {
      c.detail = check();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    report.cases.push_back(std::move(c));
  }
  return report;
}

}  // namespace tropabel
