#pragma once

// Tropical Abel map on hypercubes H_f ⊂ X_Γ^d: vertex data, a/b invariants,
// simplex sampling and cell identification, the local resolution conditions,
// staircase triangulations and the degree-1 pipeline.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/toric.hpp"
#include "tropabel/tropical.hpp"

namespace tropabel {

struct HypercubeSpec {
  std::vector<Index> f;  // f_1..f_d as edge indices

  std::size_t d() const { return f.size(); }
  std::int64_t multiplicity(Index e) const;
};

// bits[k] = 1 iff coordinate k sits at t(f_k).
struct VertexPoint {
  std::vector<int> bits;
  friend bool operator==(const VertexPoint&, const VertexPoint&) = default;
  friend auto operator<=>(const VertexPoint&, const VertexPoint&) = default;
};

// Ordered (Q_0, ..., Q_n).
using Simplex = std::vector<VertexPoint>;

// 1-based label: 2^{d−1}·b_d + GrayInverse(b_1..b_{d−1}) + 1.
std::size_t q_label(const VertexPoint& q);
VertexPoint from_label(std::size_t d, std::size_t label);
std::string q_name(const VertexPoint& q);  // "Q<label>"

toric::LatticeSimplex lattice_simplex(const Simplex& s);

// The shared inputs of the Abel map: Γ, v0, µ of degree k, D† of degree k+d
// and the hypercube H_f.
struct AbelSetup {
  Graph g;
  Index v0 = 0;
  Polarization mu;
  Divisor dref;
  HypercubeSpec spec;

  AbelSetup(Graph g, Index v0, Polarization mu, Divisor dref, HypercubeSpec spec);  // throws InputError
  Index vertex(const VertexPoint& q, std::size_t k) const;
};

Divisor div_of_vertex(const AbelSetup& s, const VertexPoint& q);
// qs(D† + div(Q)).
Divisor abel_vertex(const AbelSetup& s, const VertexPoint& q);

std::int64_t a_invariant(const AbelSetup& s, Index e, const VertexPoint& q, Index v);
// Σ_{v ∈ {s(e),t(e)} ∖ W} a^e_Q(v).
std::int64_t a_invariant(const AbelSetup& s, Index e, const VertexPoint& q, const VertexSet& w);

// φ = δ(M) with D† + div(Q) − qs(D† + div(Q)) = ∂δ(M); b^e_Q = φ(e).
OneChain b_flow(const AbelSetup& s, const VertexPoint& q);
std::int64_t b_invariant(const AbelSetup& s, Index e, const VertexPoint& q);
std::int64_t b_invariant(const AbelSetup& s, Index e, const VertexPoint& q, const VertexSet& w);

struct SimplexPoint {
  std::vector<Rational> coords;  // R_i as distance from s(f_i)
  std::vector<IndexSet> j;       // R_i = p_{f_i, d_{J_i}}
  EdgeCoefficients coeffs;       // 𝔞(e, J)
  TropicalDivisor divisor;       // div(R_t)
};
SimplexPoint point_of_simplex(const AbelSetup& s, const Simplex& simplex, const ConvexTuple& t);

struct CellOptions {
  std::size_t extra_samples = 0;  // seeded random interior tuples
  std::uint64_t seed = 0x5eed;
  TropicalRoute route = TropicalRoute::Auto;
};

struct CellResult {
  bool consistent = false;
  PseudoDivisor type;
  std::map<Index, IndexSet> positions;  // I_e for every e ∈ E
  std::vector<ConvexTuple> samples;
  std::string reason;                   // set when inconsistent
};
CellResult cell_of_simplex(const AbelSetup& s, const Simplex& simplex, const CellOptions& opt = {});

// Interior tuples used by cell_of_simplex before any random extras.
std::vector<ConvexTuple> standard_samples(std::size_t n);

struct Cond1Violation {
  std::size_t i = 0, j = 0;
  Index edge = 0;
  std::int64_t difference = 0;
};
struct Cond2Violation {
  VertexSet w;
  std::uint64_t functions = 0;  // failing j (exhaustive) or 1 (separable)
};
struct ConditionReport {
  std::vector<Cond1Violation> cond1;
  std::vector<Cond2Violation> cond2;
  std::string cond2_method;  // "exhaustive" or "separable"
  bool ok() const { return cond1.empty() && cond2.empty(); }
};

inline constexpr std::uint64_t kCond2ExhaustiveLimit = 1'000'000;

ConditionReport check_conditions(const AbelSetup& s, const Simplex& simplex);
// Same report computed with both methods, for cross-checking.
ConditionReport check_conditions_exhaustive(const AbelSetup& s, const Simplex& simplex, bool parallel = true);
ConditionReport check_conditions_separable(const AbelSetup& s, const Simplex& simplex);

// One simplex per permutation (lexicographic); chains start at the all-source
// vertex and flip one coordinate at a time.
std::vector<Simplex> staircase_triangulation(const HypercubeSpec& spec);

struct CertificateEntry {
  Simplex simplex;
  bool unimodular = false;
  Rational volume;
  CellResult cell;
  ConditionReport conditions;
  bool pass() const { return unimodular && cell.consistent && conditions.ok(); }
};
struct Certificate {
  std::vector<CertificateEntry> entries;
  Rational volume_sum;
  bool compatible() const;
};
Certificate certify_compatibility(const AbelSetup& s, const std::vector<Simplex>& triangulation,
                                  const CellOptions& opt = {});

// Choice of V̄ among the β-minimizers on Γ^{e0} avoiding s(e0).
//   Maximal:      the largest minimizer.
//   LeastWitness: the smallest minimizer containing the exceptional vertex
//                 and t(e0), and also v0 when some minimizer contains v0.
// Maximal can produce a non-quasistable (Ẽ, D̃) when a smaller minimizer
// exists; LeastWitness is the default.
enum class VbarRule { LeastWitness, Maximal };

// Degree-1 pipeline for one edge e0 (µ of degree k, D† of degree k+1).
struct Degree1Result {
  PseudoDivisor cell;
  Divisor reduced;        // qs under µ♯
  bool flat_branch = false;  // ({e0}, D♭) was already quasistable
  VertexSet vbar_on_graph;   // V = V̄ ∩ V(Γ) when not flat
};
// Throws AssertionFailure when the resulting (Ẽ, D̃) is not quasistable.
Degree1Result degree1_cell(const Graph& g, Index v0, const Polarization& mu, const Divisor& dref, Index e0,
                           VbarRule rule = VbarRule::LeastWitness);

// Reduces D† − p_{e0,r} at the given interior positions and compares types.
std::vector<Rational> degree1_interior_mismatches(const Graph& g, Index v0, const Polarization& mu,
                                                  const Divisor& dref, Index e0, const PseudoDivisor& expected,
                                                  const std::vector<Rational>& positions);

struct InjectivityReport {
  bool applicable = false;  // Γ biconnected
  std::vector<std::string> labels;  // vertex ids, then edge ids
  std::vector<PseudoDivisor> images;
  std::vector<std::pair<std::string, std::string>> collisions;
  bool injective() const { return applicable && collisions.empty(); }
};
InjectivityReport degree1_injectivity(const Graph& g, Index v0, const Polarization& mu, const Divisor& dref);

}  // namespace tropabel
