#pragma once

// Lattice geometry of cones over hypercubes and over unitary simplices.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tropabel/rational.hpp"

namespace tropabel::toric {

using IntVector = std::vector<std::int64_t>;

// Dual cone of cone([0,1]^n × {1}): generators e_i* (i = 1..n) and
// f_i* = −e_i* + e_{n+1}*, with relations X_iY_i = X_jY_j for i < j.
struct ConePresentation {
  std::size_t n = 0;
  std::vector<IntVector> generators;  // e_1*..e_n*, then f_1*..f_n*
  std::vector<std::string> names;     // "X1".."Xn", "Y1".."Yn"
  std::vector<std::pair<std::size_t, std::size_t>> relations;  // (i, j): X_iY_i = X_jY_j
  IntVector apex;                     // e_{n+1}* = e_i* + f_i*
};
ConePresentation hypercube_cone_presentation(std::size_t n);

struct SemigroupDecomposition {
  IntVector e;             // coefficient of e_i*
  IntVector f;             // coefficient of f_i*
  std::int64_t apex = 0;   // coefficient of e_{n+1}*
  IntVector recombine() const;
};
// u ∈ Z^{n+1}; throws NotInSemigroup when u lies outside the dual cone.
SemigroupDecomposition semigroup_decompose(const IntVector& u);
// Rational input: non-integral entries are also outside the semigroup.
SemigroupDecomposition semigroup_decompose(const std::vector<Rational>& u);

using LatticeSimplex = std::vector<IntVector>;  // v_0..v_n in Z^n

// |det[(v_i,1)]| / n!; throws Degenerate for a zero determinant or a vertex
// count other than n+1.
Rational simplex_volume(const LatticeSimplex& s);

struct Chart {
  LatticeSimplex vertices;
  std::vector<IntVector> u;  // ⟨u_i,(v_j,1)⟩ = δ_ij
};
// Throws NotUnimodular unless vol = 1/n!.
Chart unimodular_chart(const LatticeSimplex& s);
std::vector<Chart> blowup_charts(const std::vector<LatticeSimplex>& triangulation);

}  // namespace tropabel::toric
