#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "tropabel/error.hpp"
#include "tropabel/io.hpp"
#include "tropabel/jacobian.hpp"
#include "tropabel/selftest.hpp"

using namespace tropabel;

TEST_SUITE("jacobian") {
  TEST_CASE("theta graph, degree 0: 12 cells, f-vector (3,6,3)") {
    const Graph g = examples::theta_graph();
    const JacobianComplex j = build_jacobian(g, g.vertex_index("u"), Polarization::zero(g), 0);
    CHECK(j.cells.size() == 12);
    CHECK(j.f_vector() == std::vector<std::size_t>{3, 6, 3});
    CHECK(euler_characteristic(j) == 0);
    CHECK(Integer(static_cast<long>(j.f_vector().back())) == spanning_tree_count(g));
    // Cross-derived by the brute-force enumeration.
    CHECK(oracle::jacobian_cells(oracle::bare(g), 0, Polarization::zero(g).values, 0).size() == 12);
  }

  TEST_CASE("random complexes: cells, faces, Euler characteristic, maximal cells") {
    gen::Rng rng(support::seed(51));
    for (int trial = 0; trial < 30; ++trial) {
      const Graph g = gen::random_graph(rng, {1, 4, 6, true});
      const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-2, 2)(rng);
      const Polarization mu = gen::random_polarization(g, rng, k);
      const JacobianComplex j = build_jacobian(g, g.root(), mu, k);
      const auto fv = j.f_vector();
      CHECK(euler_characteristic(j) == (g.genus() == 0 ? 1 : 0));
      CHECK(Integer(static_cast<long>(fv.back())) == spanning_tree_count(g));
      CHECK(static_cast<std::int64_t>(fv.size()) == g.genus() + 1);
      const auto b = oracle::bare(g);
      for (const auto& c : j.cells) {
        CHECK(c.faces.size() == 2 * c.dim());
        CHECK(j.find(c.pd) == &c);
        for (const auto& f : c.faces) {
          const Cell& t = j.cells[f.target];
          CHECK(t.dim() + 1 == c.dim());
          EdgeSet expected = c.pd.edges;
          std::erase(expected, f.edge);
          CHECK(t.pd.edges == expected);
          // The face divisor is the quasistable representative of the degenerated one.
          Divisor moved = c.pd.base;
          moved[f.end == 0 ? g.edge(f.edge).src : g.edge(f.edge).dst] -= 1;
          const auto r = oracle::refine(b, mu.values, t.pd.edges, t.pd.base.c);
          std::vector<std::int64_t> diff(r.g.n, 0);
          for (Index v = 0; v < g.num_vertices(); ++v) diff[v] = moved[v] - t.pd.base[v];
          CHECK(oracle::integer_potential(r.g, g.root(), diff).has_value());
          CHECK(oracle::quasistable(r.g, g.root(), r.mu, r.d));
        }
      }
    }
  }

  TEST_CASE("degenerate rejects an edge outside the cell") {
    const Graph g = examples::theta_graph();
    const PseudoDivisor pd{{0}, support::div_of(g, {{"u", 1}})};
    CHECK_THROWS_AS(degenerate(g, 0, Polarization::zero(g), pd, 1, 0), InputError);
  }

  TEST_CASE("export formats") {
    const Graph g = examples::theta_graph();
    const JacobianComplex j = build_jacobian(g, 0, Polarization::zero(g), 0);
    const auto doc = io::Json::parse(export_complex(j, "json"));
    CHECK(doc["cells"].size() == 12);
    CHECK(doc["euler_characteristic"] == 0);
    CHECK(doc["cells"][11]["faces"].size() == 4);
    const std::string dot = export_complex(j, "dot");
    CHECK(dot.rfind("digraph jacobian {", 0) == 0);
    CHECK(dot.find("c11 -> c") != std::string::npos);
    CHECK_THROWS_AS(export_complex(j, "svg"), UnsupportedFormat);
    CHECK(j.by_key.count("E=[];D=[u:0,v:0]") == 1);
    CHECK(cell_key(g, j.cells[0].pd) == "E=[];D=[u:-1,v:1]");
  }
}
