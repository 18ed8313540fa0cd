#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "tropabel/graph.hpp"
#include "tropabel/kernels.hpp"
#include "tropabel/rational.hpp"

namespace tropabel {

struct Polarization {
  std::vector<Rational> values;  // indexed like the graph's vertices
  std::int64_t degree = 0;

  // All zero, degree 0.
  static Polarization zero(const Graph& g);
  // Computes the degree; throws InputError unless the sum is an integer.
  static Polarization from_values(const Graph& g, std::vector<Rational> values);

  Rational of(const VertexSet& v) const;
  // Least common multiple of the value denominators.
  std::int64_t common_denominator() const;
};

// µ^E / µ̂ on a refinement: µ on original vertices, 0 on exceptional ones.
Polarization induced_polarization(const Subdivision& s, const Polarization& mu);

// (E, D) with D on Γ^E; only the values on V(Γ) are stored, every
// exceptional vertex implicitly carries −1.
struct PseudoDivisor {
  EdgeSet edges;  // sorted
  Divisor base;   // on V(Γ)

  std::int64_t degree() const { return base.degree() - static_cast<std::int64_t>(edges.size()); }
  std::size_t dim() const { return edges.size(); }

  friend bool operator==(const PseudoDivisor&, const PseudoDivisor&) = default;
  friend auto operator<=>(const PseudoDivisor& a, const PseudoDivisor& b) {
    if (auto c = a.edges.size() <=> b.edges.size(); c != 0) return c;
    if (auto c = a.edges <=> b.edges; c != 0) return c;
    return a.base <=> b.base;
  }
};

// The full divisor on s.refined (s must be subdivide_edges(g, pd.edges)).
Divisor expand(const Subdivision& s, const PseudoDivisor& pd);
// Inverse of expand; throws InputError if some exceptional value is not −1.
PseudoDivisor collapse(const Subdivision& s, const Divisor& d);

Rational beta(const Graph& g, const Polarization& mu, const Divisor& d, const VertexSet& v);

// Integer problem for the kernels; throws InputError when deg D != deg µ.
kernels::BetaProblem make_beta_problem(const Graph& g, Index v0, const Polarization& mu, const Divisor& d);

struct QuasistabilityCheck {
  bool quasistable = true;
  std::optional<VertexSet> witness;  // preferred violating set
  explicit operator bool() const { return quasistable; }
};

QuasistabilityCheck is_quasistable(const Graph& g, Index v0, const Polarization& mu, const Divisor& d);
QuasistabilityCheck is_quasistable_pseudo(const Graph& g, Index v0, const Polarization& mu, const PseudoDivisor& pd);

struct QsOptions {
  std::uint64_t iteration_cap = 1'000'000;
};

struct QsReduction {
  Divisor divisor;       // the quasistable representative
  ZeroChain potential;   // M with D − divisor = ∂δ(M), M(v0) = 0
  std::uint64_t firings = 0;
};

QsReduction qs_reduce(const Graph& g, Index v0, const Polarization& mu, const Divisor& d, QsOptions opt = {});

struct OracleResult {
  Divisor divisor;
  ZeroChain potential;
};
enum class OracleScan { Pruned, Exhaustive, ExhaustiveParallel };

// Bounded brute force over M ∈ [−B,B]^V, M(v0) = 0. Throws NoneFound or
// MultipleFound. Every scan visits the whole box (Pruned skips only branches
// that provably fail).
OracleResult qs_reduce_oracle(const Graph& g, Index v0, const Polarization& mu, const Divisor& d, std::int64_t bound,
                              OracleScan scan = OracleScan::Pruned);

// M with ∂δ(M) = D1 − D2 and M(v0) = 0. Throws NotPrincipal.
ZeroChain laplacian_potential(const Graph& g, Index v0, const Divisor& d1, const Divisor& d2);

std::vector<std::vector<std::int64_t>> laplacian_matrix(const Graph& g);

// All (v0,µ)-quasistable pseudo-divisors of degree d, sorted.
std::vector<PseudoDivisor> enumerate_quasistable(const Graph& g, Index v0, const Polarization& mu, std::int64_t d);
std::vector<PseudoDivisor> enumerate_quasistable_serial(const Graph& g, Index v0, const Polarization& mu,
                                                        std::int64_t d);

}  // namespace tropabel
