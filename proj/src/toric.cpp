#include "tropabel/toric.hpp"

#include "tropabel/error.hpp"
#include "tropabel/linalg.hpp"

namespace tropabel::toric {

ConePresentation hypercube_cone_presentation(std::size_t n) {
  if (n == 0) throw InputError("hypercube dimension must be at least 1");
  ConePresentation p;
  p.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n + 1, 0);
    e[i] = 1;
    p.generators.push_back(e);
    p.names.push_back("X" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    IntVector f(n + 1, 0);
    f[i] = -1;
    f[n] = 1;
    p.generators.push_back(f);
    p.names.push_back("Y" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) p.relations.emplace_back(i, j);
  p.apex.assign(n + 1, 0);
  p.apex[n] = 1;
  return p;
}

IntVector SemigroupDecomposition::recombine() const {
  const std::size_t n = e.size();
  IntVector u(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] += e[i] - f[i];
    u[n] += f[i];
  }
  u[n] += apex;
  return u;
}

SemigroupDecomposition semigroup_decompose(const IntVector& u) {
  if (u.size() < 2) throw InputError("semigroup element needs at least 2 coordinates");
  const std::size_t n = u.size() - 1;
  SemigroupDecomposition out{IntVector(n, 0), IntVector(n, 0), u[n]};
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] >= 0) {
      out.e[i] = u[i];
    } else {
      out.f[i] = -u[i];
      out.apex += u[i];
    }
  }
  if (out.apex < 0) throw NotInSemigroup("last coefficient " + std::to_string(out.apex) + " is negative");
  return out;
}

SemigroupDecomposition semigroup_decompose(const std::vector<Rational>& u) {
  IntVector v;
  for (const auto& q : u) {
    if (!is_integer(q)) throw NotInSemigroup("non-integral coordinate " + to_string(q));
    v.push_back(to_int64_exact(q));
  }
  return semigroup_decompose(v);
}

namespace {

linalg::Matrix homogenized(const LatticeSimplex& s) {
  const std::size_t n = s.empty() ? 0 : s.front().size();
  if (s.size() != n + 1) throw Degenerate("a simplex in Z^n needs exactly n+1 vertices");
  linalg::Matrix a = linalg::zeros(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (s[i].size() != n) throw Degenerate("vertices of different dimensions");
    for (std::size_t k = 0; k < n; ++k) a[i][k] = s[i][k];
    a[i][n] = 1;
  }
  return a;
}

Rational factorial(std::size_t n) {
  Rational f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<long>(k);
  return f;
}

}  // namespace

Rational simplex_volume(const LatticeSimplex& s) {
  Rational det = linalg::determinant(homogenized(s));
  if (det == 0) throw Degenerate("vertices are affinely dependent");
  return abs(det) / factorial(s.size() - 1);
}

Chart unimodular_chart(const LatticeSimplex& s) {
  const std::size_t n = s.size() - 1;
  linalg::Matrix a = homogenized(s);
  Rational det = linalg::determinant(a);
  if (abs(det) != 1) throw NotUnimodular("simplex volume is " + to_string(abs(det)) + "/" + std::to_string(n) + "!");
  auto inv = linalg::inverse(a);
  ensure(inv.has_value(), "unimodular matrix is not invertible");
  Chart c{s, {}};
  for (std::size_t i = 0; i <= n; ++i) {
    IntVector u(n + 1);
    for (std::size_t k = 0; k <= n; ++k) u[k] = to_int64_exact((*inv)[k][i]);
    c.u.push_back(std::move(u));
  }
  IntVector sum(n + 1, 0);
  for (const auto& u : c.u)
    for (std::size_t k = 0; k <= n; ++k) sum[k] += u[k];
  for (std::size_t k = 0; k <= n; ++k) ensure(sum[k] == (k == n ? 1 : 0), "chart generators do not sum to e_{n+1}*");
  return c;
}

std::vector<Chart> blowup_charts(const std::vector<LatticeSimplex>& triangulation) {
  std::vector<Chart> out;
  out.reserve(triangulation.size());
  for (const auto& s : triangulation) out.push_back(unimodular_chart(s));
  return out;
}

}  // namespace tropabel::toric
