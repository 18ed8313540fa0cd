#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "tropabel/error.hpp"
#include "tropabel/kernels.hpp"
#include "tropabel/selftest.hpp"

using namespace tropabel;
using support::div_of;

namespace {

std::int64_t box_for(const QsReduction& r) {
  std::int64_t b = 1;
  for (auto m : r.potential.c) b = std::max(b, std::abs(m));
  return b + 1;
}

}  // namespace

TEST_SUITE("quasistability") {
  TEST_CASE("beta matches the definition on every subset") {
    gen::Rng rng(support::seed(21));
    for (int trial = 0; trial < 60; ++trial) {
      const auto inst = support::random_instance(rng);
      const auto b = oracle::bare(inst.g);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << inst.g.num_vertices()); ++m)
        CHECK(beta(inst.g, inst.mu, inst.d, support::set_of(m, inst.g.num_vertices())) ==
              oracle::beta(b, inst.mu.values, inst.d.c, m));
    }
  }

  TEST_CASE("quasistability check matches the oracle") {
    gen::Rng rng(support::seed(22));
    int positives = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const auto inst = support::random_instance(rng);
      const bool expected = oracle::quasistable(oracle::bare(inst.g), inst.g.root(), inst.mu.values, inst.d.c);
      const auto got = is_quasistable(inst.g, inst.g.root(), inst.mu, inst.d);
      CHECK(got.quasistable == expected);
      if (!got.quasistable) {
        REQUIRE(got.witness.has_value());
        const Rational b = beta(inst.g, inst.mu, inst.d, *got.witness);
        const bool has_root = std::binary_search(got.witness->begin(), got.witness->end(), inst.g.root());
        CHECK((b < 0 || (b == 0 && has_root)));
      }
      positives += expected;
    }
    CHECK(positives > 0);
  }

  TEST_CASE("two-edge graph: 3u-3v reduces to u-v") {
    const Graph g = examples::two_edge_graph();
    const auto r = qs_reduce(g, g.vertex_index("u"), Polarization::zero(g), div_of(g, {{"u", 3}, {"v", -3}}));
    CHECK(r.divisor == div_of(g, {{"u", 1}, {"v", -1}}));
  }

  TEST_CASE("reduction: unique representative, potential, idempotence, class constancy") {
    gen::Rng rng(support::seed(23));
    for (int trial = 0; trial < 60; ++trial) {
      const auto inst = support::random_instance(rng, {1, 4, 6, true});
      const auto b = oracle::bare(inst.g);
      const Index v0 = inst.g.root();
      const QsReduction r = qs_reduce(inst.g, v0, inst.mu, inst.d);
      const auto found = oracle::quasistable_representatives(b, v0, inst.mu.values, inst.d.c, box_for(r));
      REQUIRE(found.size() == 1);
      CHECK(*found.begin() == r.divisor.c);
      CHECK(r.potential[v0] == 0);
      CHECK((inst.d - r.divisor) == laplacian(inst.g, r.potential));
      CHECK(qs_reduce(inst.g, v0, inst.mu, r.divisor).divisor == r.divisor);
      CHECK(qs_reduce_oracle(inst.g, v0, inst.mu, inst.d, box_for(r), OracleScan::Exhaustive).divisor == r.divisor);
      CHECK(qs_reduce_oracle(inst.g, v0, inst.mu, inst.d, box_for(r)).divisor == r.divisor);
    }
  }

  TEST_CASE("library oracle raises on an empty or ambiguous box") {
    const Graph g = examples::two_edge_graph();
    const Index u = g.vertex_index("u");
    CHECK_THROWS_AS(qs_reduce_oracle(g, u, Polarization::zero(g), div_of(g, {{"u", 9}, {"v", -9}}), 1), NoneFound);
  }

  TEST_CASE("degree mismatch is an input error") {
    const Graph g = examples::two_edge_graph();
    CHECK_THROWS_AS(qs_reduce(g, 0, Polarization::zero(g), div_of(g, {{"u", 1}})), InputError);
  }

  TEST_CASE("laplacian potential agrees with the rational solve") {
    gen::Rng rng(support::seed(24));
    for (int trial = 0; trial < 60; ++trial) {
      const Graph g = gen::random_graph(rng);
      ZeroChain m(g.num_vertices());
      for (Index v = 0; v < g.num_vertices(); ++v)
        m[v] = v == g.root() ? 0 : std::uniform_int_distribution<std::int64_t>(-3, 3)(rng);
      const Divisor d1 = gen::random_divisor(g, rng, 0);
      const Divisor d2 = d1 - laplacian(g, m);
      const ZeroChain got = laplacian_potential(g, g.root(), d1, d2);
      const auto expected = oracle::integer_potential(oracle::bare(g), g.root(), laplacian(g, m).c);
      REQUIRE(expected.has_value());
      CHECK(got.c == *expected);
    }
    const Graph t = examples::theta_graph();
    CHECK_THROWS_AS(laplacian_potential(t, 0, div_of(t, {{"u", 1}}), div_of(t, {{"v", 1}})), NotPrincipal);
  }

  TEST_CASE("pseudo-divisor quasistability matches the refined oracle") {
    gen::Rng rng(support::seed(25));
    for (int trial = 0; trial < 200; ++trial) {
      const auto inst = support::random_instance(rng, {1, 4, 6, true});
      EdgeSet e;
      for (Index k = 0; k < inst.g.num_edges(); ++k)
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) e.push_back(k);
      Divisor base = inst.d;
      base[inst.g.root()] += static_cast<std::int64_t>(e.size());
      const PseudoDivisor pd{e, base};
      CHECK(is_quasistable_pseudo(inst.g, inst.g.root(), inst.mu, pd).quasistable ==
            oracle::pseudo_quasistable(oracle::bare(inst.g), inst.g.root(), inst.mu.values, e, base.c));
    }
  }

  TEST_CASE("expand and collapse are inverse") {
    const Graph g = examples::casquinha_graph();
    const PseudoDivisor pd{{0, 2}, div_of(g, {{"v1", 1}, {"v3", 2}})};
    const Subdivision s = subdivide_edges(g, pd.edges);
    const Divisor full = expand(s, pd);
    CHECK(full.degree() == pd.degree());
    CHECK(collapse(s, full) == pd);
    Divisor bad = full;
    bad[s.refined.vertex_index("e1@mid")] = 0;
    CHECK_THROWS_AS(collapse(s, bad), InputError);
  }

  TEST_CASE("enumeration agrees with the brute-force cell list") {
    gen::Rng rng(support::seed(26));
    for (int trial = 0; trial < 25; ++trial) {
      const Graph g = gen::random_graph(rng, {1, 3, 4, true});
      const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-1, 1)(rng);
      const Polarization mu = gen::random_polarization(g, rng, k, 3);
      const auto cells = enumerate_quasistable(g, g.root(), mu, k);
      CHECK(cells == enumerate_quasistable_serial(g, g.root(), mu, k));
      std::set<std::pair<std::vector<Index>, std::vector<std::int64_t>>> got;
      for (const auto& c : cells) got.emplace(c.edges, c.base.c);
      CHECK(got == oracle::jacobian_cells(oracle::bare(g), g.root(), mu.values, k));
      CHECK(std::is_sorted(cells.begin(), cells.end()));
    }
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("violator search: serial, parallel and min-cut agree") {
    gen::Rng rng(support::seed(31));
    for (int trial = 0; trial < 300; ++trial) {
      const auto inst = support::random_instance(rng, {1, 7, 11, true});
      const auto p = make_beta_problem(inst.g, inst.g.root(), inst.mu, inst.d);
      const auto s = kernels::best_violator_serial(p);
      const auto par = kernels::best_violator_parallel(p);
      const auto mc = kernels::best_violator_mincut(p);
      REQUIRE(s.has_value() == par.has_value());
      REQUIRE(s.has_value() == mc.has_value());
      CHECK(kernels::no_violator(p) == !s.has_value());
      if (s) {
        CHECK(s->set == par->set);
        CHECK(s->set == mc->set);
        CHECK(s->value == kernels::scaled_beta(p, s->set));
      }
    }
  }

  TEST_CASE("minimizers: serial and min-cut agree, least is contained in maximal") {
    gen::Rng rng(support::seed(32));
    for (int trial = 0; trial < 300; ++trial) {
      const auto inst = support::random_instance(rng, {2, 7, 11, true});
      const auto p = make_beta_problem(inst.g, inst.g.root(), inst.mu, inst.d);
      const Index avoid = std::uniform_int_distribution<Index>(0, p.n - 1)(rng);
      const auto a = kernels::minimizer_avoiding_serial(p, avoid);
      const auto b = kernels::minimizer_avoiding_mincut(p, avoid);
      CHECK(a.set == b.set);
      CHECK(a.value == b.value);
      CHECK(!std::binary_search(a.set.begin(), a.set.end(), avoid));

      VertexSet required;
      for (Index v = 0; v < p.n; ++v)
        if (v != avoid && std::uniform_int_distribution<int>(0, 3)(rng) == 0) required.push_back(v);
      const auto ls = kernels::least_minimizer_serial(p, required, avoid);
      const auto lm = kernels::least_minimizer_mincut(p, required, avoid);
      CHECK(ls.set == lm.set);
      CHECK(ls.value == lm.value);
      CHECK(std::includes(ls.set.begin(), ls.set.end(), required.begin(), required.end()));
      // Brute force: no subset with the constraints beats or ties it while being smaller.
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.n); ++m) {
        const VertexSet s = support::set_of(m, p.n);
        if ((m >> avoid) & 1) continue;
        if (!std::includes(s.begin(), s.end(), required.begin(), required.end())) continue;
        const auto v = kernels::scaled_beta(p, m);
        CHECK(v >= ls.value);
        if (v == ls.value) CHECK(std::includes(s.begin(), s.end(), ls.set.begin(), ls.set.end()));
      }
      if (required.empty()) {
        CHECK(ls.set.empty() == (a.value == 0));
        CHECK(std::includes(a.set.begin(), a.set.end(), ls.set.begin(), ls.set.end()));
      }
    }
  }

  TEST_CASE("oracle scan: serial, parallel and pruned agree") {
    gen::Rng rng(support::seed(33));
    for (int trial = 0; trial < 60; ++trial) {
      const auto inst = support::random_instance(rng, {1, 5, 7, true});
      kernels::OracleProblem op{make_beta_problem(inst.g, inst.g.root(), inst.mu, inst.d),
                                laplacian_matrix(inst.g), 1 + trial % 3};
      const auto serial = kernels::oracle_scan_serial(op);
      CHECK(serial == kernels::oracle_scan_parallel(op));
      CHECK(serial == kernels::oracle_scan_pruned(op));
    }
  }

  TEST_CASE("separable sweep: serial and parallel agree with a direct count") {
    gen::Rng rng(support::seed(34));
    auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    for (int trial = 0; trial < 40; ++trial) {
      kernels::SeparableSweep s;
      s.edges = static_cast<std::size_t>(uni(1, 4));
      s.choices = static_cast<std::size_t>(uni(1, 3));
      const std::size_t rows = static_cast<std::size_t>(uni(1, 5));
      for (std::size_t r = 0; r < rows; ++r) {
        s.base.push_back(uni(-3, 3));
        const auto half = uni(0, 4);
        s.lo.push_back(-half);
        s.hi.push_back(half);
        s.term.emplace_back(s.edges, std::vector<std::int64_t>(s.choices));
        for (auto& e : s.term.back())
          for (auto& x : e) x = uni(-2, 2);
      }
      const auto serial = kernels::sweep_serial(s);
      CHECK(serial == kernels::sweep_parallel(s));
      for (std::size_t r = 0; r < rows; ++r) {
        std::uint64_t bad = 0;
        std::vector<std::size_t> j(s.edges, 0);
        while (true) {
          std::int64_t v = s.base[r];
          for (std::size_t e = 0; e < s.edges; ++e) v += s.term[r][e][j[e]];
          bad += !(s.lo[r] < v && v <= s.hi[r]);
          std::size_t e = 0;
          for (; e < s.edges; ++e) {
            if (++j[e] < s.choices) break;
            j[e] = 0;
          }
          if (e == s.edges) break;
        }
        CHECK(serial[r] == bad);
      }
    }
  }
}
