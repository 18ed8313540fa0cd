#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "tropabel/error.hpp"
#include "tropabel/io.hpp"
#include "tropabel/lattice.hpp"
#include "tropabel/selftest.hpp"
#include "tropabel/tropical.hpp"

using namespace tropabel;
using oracle::q;

namespace {

// Nonzero entries are ±a with alternating signs, the first one being a.
bool alternating(const AdmissibleSequence& s) {
  std::int64_t expect = s.level;
  for (auto x : s.a) {
    if (x == 0) continue;
    if (x != expect) return false;
    expect = -expect;
  }
  return expect == -s.level || s.level == 0;
}

TropicalDivisor random_tropical(const Graph& g, gen::Rng& rng, std::int64_t degree) {
  TropicalDivisor d(g, gen::random_divisor(g, rng, 0, 2));
  const int points = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int k = 0; k < points; ++k) {
    const Index e = std::uniform_int_distribution<Index>(0, g.num_edges() - 1)(rng);
    const std::int64_t den = std::uniform_int_distribution<std::int64_t>(2, 4)(rng);
    const std::int64_t num = std::uniform_int_distribution<std::int64_t>(1, den - 1)(rng);
    d.add_point(g, e, q(num, den), std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1);
  }
  d.add_vertex(g.root(), degree - d.degree());
  return d;
}

gen::GraphOptions with_edges() { return {1, 4, 6, true}; }

}  // namespace

TEST_SUITE("tropical") {
  TEST_CASE("convex tuples and index sets validate their input") {
    CHECK_THROWS_AS(ConvexTuple({q(1, 2), q(2, 3)}), InputError);
    CHECK_THROWS_AS(ConvexTuple({q(-1, 2)}), InputError);
    const ConvexTuple t({q(1, 4), q(1, 3)});
    CHECK(t.t(3) == q(5, 12));
    CHECK(t.r(2) == q(7, 12));
    CHECK(t.r(3) == 1);
    CHECK_THROWS_AS(IndexSet({3}).validate(2), InputError);
    CHECK(d_of(IndexSet{-1, 2}, t) == q(2, 3));
    CHECK(d_of(IndexSet{1, 2}, t) == q(7, 12));
  }

  TEST_CASE("organized segments are admissible and equivalent with equal endpoints") {
    gen::Rng rng(support::seed(41));
    for (int trial = 0; trial < 400; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
      std::int64_t a = std::uniform_int_distribution<std::int64_t>(-3, 3)(rng);
      const IndexSet i = gen::random_index_set(rng, n);
      const AdmissibleSequence s = organize_segment(a, i, n);
      CHECK(s.a.size() == n + 2);
      CHECK(s.is_admissible());
      CHECK(alternating(s));
      const ConvexTuple t = gen::random_convex_tuple(rng, n);
      std::vector<std::pair<Rational, std::int64_t>> diff{{d_of(i, t), a}};
      for (std::size_t j = 0; j <= n + 1; ++j) diff.emplace_back(t.r(j), -s.a[j]);
      const auto [deg0, moment] = oracle::segment_moment(diff);
      CHECK(deg0);
      CHECK(moment == 0);
      const SegmentCheck c = segment_principality(diff);
      CHECK(c.equal_endpoints());
    }
  }

  TEST_CASE("segment principality matches the first-moment oracle") {
    gen::Rng rng(support::seed(42));
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<std::pair<Rational, std::int64_t>> pts;
      const int k = std::uniform_int_distribution<int>(1, 5)(rng);
      for (int j = 0; j < k; ++j)
        pts.emplace_back(q(std::uniform_int_distribution<int>(0, 6)(rng), 6), std::uniform_int_distribution<int>(-2, 2)(rng));
      const auto [deg0, moment] = oracle::segment_moment(pts);
      const SegmentCheck c = segment_principality(pts);
      CHECK(c.principal == deg0);
      if (deg0) CHECK(abs(c.endpoint_difference) == abs(moment));
    }
    CHECK_THROWS_AS(segment_principality({{q(3, 2), 1}}), InputError);
  }

  TEST_CASE("organize_divisor replaces every coefficient by its organized sequence") {
    const Graph g = examples::two_edge_graph();
    const ConvexTuple t({q(1, 3), q(1, 4)});
    const EdgeCoefficients coeffs{{{0, IndexSet{1}}, -1}, {{1, IndexSet{-1, 2}}, 2}};
    const OrganizedDivisor o = organize_divisor(g, coeffs, t);
    CHECK(o.table.size() == 2);
    CHECK(o.divisor.degree() == coefficient_divisor(g, coeffs, t).degree());
    CHECK(is_principal(g, o.divisor - coefficient_divisor(g, coeffs, t)));
  }

  TEST_CASE("canonical form moves endpoint points onto vertices") {
    const Graph g = examples::two_edge_graph();
    TropicalDivisor d(g);
    d.add_point(g, 0, 0, 2);
    d.add_point(g, 1, 1, -1);
    d.add_point(g, 0, q(1, 2), 1);
    d.add_point(g, 0, q(1, 2), -1);
    CHECK(d.vertex_supported());
    CHECK(d.vertex_part() == support::div_of(g, {{"u", 2}, {"v", -1}}));
  }

  TEST_CASE("principality agrees with the refined-grid oracle") {
    gen::Rng rng(support::seed(43));
    for (int trial = 0; trial < 150; ++trial) {
      const Graph g = gen::random_graph(rng, with_edges());
      const TropicalDivisor d = random_tropical(g, rng, 0);
      CHECK(is_principal(g, d) == oracle::tropical_principal(g, d));
    }
    const Graph g = examples::theta_graph();
    CHECK(is_principal(g, io::parse_divisor(g, "p(e1,1/3)+p(e2,1/3)+p(e3,1/3)-3u")));
    CHECK(!is_principal(g, io::parse_divisor(g, "p(e1,1/3)-u")));
  }

  TEST_CASE("metric flow has the requested boundary") {
    const Graph g = examples::theta_graph();
    const std::vector<Rational> len{q(1, 2), q(1), q(3, 2)};
    const auto phi = metric_flow(g, len, support::div_of(g, {{"u", 1}, {"v", -1}}));
    Rational at_v = 0;
    for (Index e = 0; e < 3; ++e) at_v += phi[e];
    CHECK(at_v == -1);
    // Potential differences agree along every edge.
    CHECK(phi[0] * len[0] == phi[1] * len[1]);
    CHECK(phi[1] * len[1] == phi[2] * len[2]);
  }

  TEST_CASE("tropical reduction: both routes agree and the result is certified by the oracles") {
    gen::Rng rng(support::seed(44));
    for (int trial = 0; trial < 80; ++trial) {
      const Graph g = gen::random_graph(rng, with_edges());
      const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-1, 1)(rng);
      const Polarization mu = gen::random_polarization(g, rng, k, 3);
      const TropicalDivisor d = random_tropical(g, rng, k);
      const TropicalReducer red(g, g.root(), mu);
      const TropicalReduction a = red.reduce_by_subdivision(d);
      const TropicalReduction b = red.reduce_by_lattice(d);
      CHECK(a.divisor == b.divisor);
      CHECK(a.type == b.type);
      CHECK(oracle::tropical_principal(g, d - a.divisor));
      CHECK(oracle::pseudo_quasistable(oracle::bare(g), g.root(), mu.values, a.type.edges, a.type.base.c));
      REQUIRE(a.positions.size() == a.type.edges.size());
      TropicalDivisor rebuilt(g, a.type.base);
      for (std::size_t k2 = 0; k2 < a.positions.size(); ++k2) {
        CHECK(a.positions[k2] > 0);
        CHECK(a.positions[k2] < 1);
        rebuilt.add_point(g, a.type.edges[k2], a.positions[k2], -1);
      }
      CHECK(rebuilt == a.divisor);
      CHECK(red.reduce(a.divisor).divisor == a.divisor);
    }
  }

  TEST_CASE("tropical equivalence") {
    const Graph g = examples::theta_graph();
    CHECK(trop_equivalent(g, io::parse_divisor(g, "p(e1,1/3)+p(e2,1/3)+p(e3,1/3)"), io::parse_divisor(g, "3u")));
    CHECK(!trop_equivalent(g, io::parse_divisor(g, "p(e1,1/4)"), io::parse_divisor(g, "p(e1,1/2)")));
  }

  TEST_CASE("lattice reducer: Abel-Jacobi differences vanish exactly on principal divisors") {
    gen::Rng rng(support::seed(45));
    for (int trial = 0; trial < 60; ++trial) {
      const Graph g = gen::random_graph(rng, with_edges());
      const LatticeReducer lr(g, g.root(), Polarization::zero(g));
      const TropicalDivisor d = random_tropical(g, rng, 0);
      CHECK(lr.equivalent(d, TropicalDivisor(g)) == oracle::tropical_principal(g, d));
    }
  }
}
