#pragma once

// Abel–Jacobi coordinates on X_Γ and reduction by lattice search. Two
// divisors of equal degree are equivalent iff their coordinates differ by an
// element of Q·Z^g, Q the Gram matrix of the fundamental cycles. Each
// quasistable cell (E,D) is tested for a point x ∈ (0,1)^E with
// AJ(D − Σ p_{e,x_e}) ≡ AJ(𝒟).

#include <vector>

#include "tropabel/linalg.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/tropical.hpp"

namespace tropabel {

class LatticeReducer {
 public:
  LatticeReducer(const Graph& g, Index v0, const Polarization& mu);

  std::size_t genus() const { return cycles_.size(); }
  linalg::Vector abel_jacobi(const TropicalDivisor& d) const;
  // Equal degree assumed.
  bool equivalent(const TropicalDivisor& a, const TropicalDivisor& b) const;
  TropicalReduction reduce(const TropicalDivisor& d) const;

  const std::vector<PseudoDivisor>& cells() const { return cells_; }

 private:
  bool in_lattice(const linalg::Vector& v) const;

  Graph g_;
  std::vector<Cycle> cycles_;
  std::vector<linalg::Vector> edge_vector_;    // c_e = (γ_i(e))_i
  std::vector<linalg::Vector> vertex_vector_;  // AJ(v), tree path from the root
  linalg::Matrix gram_;
  linalg::Matrix gram_inverse_;
  std::vector<PseudoDivisor> cells_;
  std::int64_t degree_;
};

}  // namespace tropabel
