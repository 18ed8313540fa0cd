#include "tropabel/lattice.hpp"

#include <stdexcept>

#include "tropabel/error.hpp"

namespace tropabel {

namespace {

linalg::Vector axpy(linalg::Vector y, const Rational& a, const linalg::Vector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

Integer floor_of(const Rational& q) {
  Integer z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

Integer ceil_of(const Rational& q) {
  Integer z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

}  // namespace

LatticeReducer::LatticeReducer(const Graph& g, Index v0, const Polarization& mu)
    : g_(g), cycles_(cycle_basis(g)), degree_(mu.degree) {
  const std::size_t genus = cycles_.size();
  edge_vector_.assign(g_.num_edges(), linalg::Vector(genus, 0));
  for (std::size_t i = 0; i < genus; ++i)
    for (Index e = 0; e < g_.num_edges(); ++e) edge_vector_[e][i] = cycles_[i][e];

  SpanningTree tree = bfs_tree(g_);
  vertex_vector_.assign(g_.num_vertices(), linalg::Vector(genus, 0));
  for (Index v : tree.order) {
    if (tree.parent_edge[v] == kNoIndex) continue;
    const Index e = tree.parent_edge[v];
    const Rational sign = g_.edge(e).dst == v ? 1 : -1;
    vertex_vector_[v] = axpy(vertex_vector_[tree.parent_vertex[v]], sign, edge_vector_[e]);
  }

  gram_ = linalg::zeros(genus, genus);
  for (std::size_t i = 0; i < genus; ++i)
    for (std::size_t j = 0; j < genus; ++j)
      for (Index e = 0; e < g_.num_edges(); ++e) gram_[i][j] += cycles_[i][e] * cycles_[j][e];
  auto inv = linalg::inverse(gram_);
  ensure(inv.has_value(), "cycle Gram matrix is singular");
  gram_inverse_ = std::move(*inv);

  cells_ = enumerate_quasistable(g_, v0, mu, mu.degree);
}

linalg::Vector LatticeReducer::abel_jacobi(const TropicalDivisor& d) const {
  linalg::Vector out(genus(), 0);
  for (Index v = 0; v < g_.num_vertices(); ++v)
    if (d.vertex_part()[v] != 0) out = axpy(std::move(out), d.vertex_part()[v], vertex_vector_[v]);
  for (const auto& [key, w] : d.interior()) {
    out = axpy(std::move(out), w, vertex_vector_[g_.edge(key.first).src]);
    out = axpy(std::move(out), w * key.second, edge_vector_[key.first]);
  }
  return out;
}

bool LatticeReducer::in_lattice(const linalg::Vector& v) const {
  for (const auto& z : linalg::multiply(gram_inverse_, v))
    if (!is_integer(z)) return false;
  return true;
}

bool LatticeReducer::equivalent(const TropicalDivisor& a, const TropicalDivisor& b) const {
  linalg::Vector diff = axpy(abel_jacobi(a), -1, abel_jacobi(b));
  return in_lattice(diff);
}

TropicalReduction LatticeReducer::reduce(const TropicalDivisor& d) const {
  if (d.degree() != degree_) throw InputError("divisor degree differs from polarization degree");
  const std::size_t genus = this->genus();
  const linalg::Vector target = abel_jacobi(d);

  std::optional<TropicalReduction> found;
  auto record = [&](TropicalReduction r) {
    ensure(!found.has_value(), "lattice search found two quasistable representatives");
    found = std::move(r);
  };

  for (const auto& cell : cells_) {
    if (genus == 0 && !cell.edges.empty()) continue;
    // b = AJ(D') − Σ AJ(s(e)) − AJ(𝒟); need C x ∈ b + Λ with x ∈ (0,1)^E.
    linalg::Vector b = axpy(abel_jacobi(TropicalDivisor(g_, cell.base)), -1, target);
    for (Index e : cell.edges) b = axpy(std::move(b), -1, vertex_vector_[g_.edge(e).src]);

    const std::size_t k = cell.edges.size();
    if (k == 0) {
      if (in_lattice(b)) record({TropicalDivisor(g_, cell.base), cell, {}});
      continue;
    }

    linalg::Matrix c = linalg::zeros(genus, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < genus; ++i) c[i][j] = edge_vector_[cell.edges[j]][i];
    const linalg::Matrix a = linalg::multiply(gram_inverse_, c);
    const linalg::Vector w = linalg::multiply(gram_inverse_, b);

    // z = A x − w ranges over a box as x runs through [0,1]^k.
    std::vector<Integer> lo(genus), hi(genus);
    bool empty = false;
    for (std::size_t i = 0; i < genus; ++i) {
      Rational mn = -w[i], mx = -w[i];
      for (std::size_t j = 0; j < k; ++j) (a[i][j] < 0 ? mn : mx) += a[i][j];
      lo[i] = ceil_of(mn);
      hi[i] = floor_of(mx);
      if (lo[i] > hi[i]) empty = true;
    }
    if (empty) continue;

    std::vector<Integer> z = lo;
    while (true) {
      linalg::Vector rhs = b;
      for (std::size_t i = 0; i < genus; ++i)
        for (std::size_t j = 0; j < genus; ++j) rhs[i] += gram_[i][j] * Rational(z[j]);
      std::optional<linalg::Vector> x;
      try {
        x = linalg::solve(c, rhs);
      } catch (const std::invalid_argument&) {
        throw AssertionFailure("cycle coordinates of a quasistable cell are dependent");
      }
      if (x) {
        bool interior = true;
        for (const auto& xi : *x) interior = interior && xi > 0 && xi < 1;
        if (interior) {
          TropicalReduction r{TropicalDivisor(g_, cell.base), cell, *x};
          for (std::size_t j = 0; j < k; ++j) r.divisor.add_point(g_, cell.edges[j], (*x)[j], -1);
          record(std::move(r));
        }
      }
      std::size_t i = 0;
      for (; i < genus; ++i) {
        if (z[i] < hi[i]) {
          ++z[i];
          break;
        }
        z[i] = lo[i];
      }
      if (i == genus) break;
    }
  }
  ensure(found.has_value(), "lattice search found no quasistable representative");
  return std::move(*found);
}

}  // namespace tropabel
