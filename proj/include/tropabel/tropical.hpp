#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/rational.hpp"

namespace tropabel {

// p_{e,r} at distance r from s(e) on the unit-length curve X_Γ.
struct TropicalPoint {
  Index edge = 0;
  Rational pos;
};

// Finite integer combination of points of X_Γ in canonical form: points at
// r = 0 or 1 are stored on the incident vertex, zero weights are dropped.
class TropicalDivisor {
 public:
  using PointKey = std::pair<Index, Rational>;

  TropicalDivisor() = default;
  explicit TropicalDivisor(const Graph& g);
  // Vertex-supported divisor.
  TropicalDivisor(const Graph& g, const Divisor& d);

  void add_vertex(Index v, std::int64_t w);
  void add_point(const Graph& g, Index e, const Rational& pos, std::int64_t w);

  const Divisor& vertex_part() const { return vertices_; }
  const std::map<PointKey, std::int64_t>& interior() const { return interior_; }
  std::int64_t degree() const;
  bool vertex_supported() const { return interior_.empty(); }
  // lcm of interior position denominators (1 if vertex supported).
  std::int64_t common_denominator() const;

  TropicalDivisor& operator+=(const TropicalDivisor& o);
  TropicalDivisor& operator-=(const TropicalDivisor& o);
  friend TropicalDivisor operator+(TropicalDivisor a, const TropicalDivisor& b) { return a += b; }
  friend TropicalDivisor operator-(TropicalDivisor a, const TropicalDivisor& b) { return a -= b; }
  TropicalDivisor scaled(std::int64_t k) const;
  friend bool operator==(const TropicalDivisor& a, const TropicalDivisor& b) {
    return a.vertices_ == b.vertices_ && a.interior_ == b.interior_;
  }

 private:
  Divisor vertices_;
  std::map<PointKey, std::int64_t> interior_;
};

// t_1..t_n with t_j >= 0 and Σ t_j <= 1.
class ConvexTuple {
 public:
  ConvexTuple() = default;
  explicit ConvexTuple(std::vector<Rational> t);  // throws InputError

  std::size_t n() const { return t_.size(); }
  // t(0) = 0, t(n+1) = 1 − Σ t_j.
  Rational t(std::size_t j) const;
  // r_j = Σ_{i<=j} t_i for 0 <= j <= n+1 (so r_{n+1} = 1).
  Rational r(std::size_t j) const;
  const std::vector<Rational>& values() const { return t_; }

 private:
  std::vector<Rational> t_;
};

// I ⊆ {−1, 1, ..., n}; stored sorted.
struct IndexSet {
  std::vector<int> members;

  IndexSet() = default;
  IndexSet(std::initializer_list<int> m);
  explicit IndexSet(std::vector<int> m);

  bool far_end() const { return !members.empty() && members.front() == -1; }
  bool contains(int j) const;
  void validate(std::size_t n) const;  // throws InputError

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;
};

struct AdmissibleSequence {
  std::int64_t level = 0;
  std::vector<std::int64_t> a;  // a_0..a_{n+1}

  // Σ a_j = level, a_j ∈ {0, ±level}, every window sum bounded by |level|.
  bool is_admissible() const;
  friend bool operator==(const AdmissibleSequence&, const AdmissibleSequence&) = default;
};

Rational d_of(const IndexSet& i, const ConvexTuple& t);

AdmissibleSequence organize_segment(std::int64_t a, const IndexSet& i, std::size_t n);

using EdgeCoefficients = std::map<std::pair<Index, IndexSet>, std::int64_t>;

// D_t^𝔞 = Σ 𝔞(e,I) p_{e, d_I}.
TropicalDivisor coefficient_divisor(const Graph& g, const EdgeCoefficients& coeffs, const ConvexTuple& t);

struct OrganizedDivisor {
  TropicalDivisor divisor;
  std::map<std::pair<Index, IndexSet>, AdmissibleSequence> table;
};
// The organized version: each 𝔞(e,I) p_{e,d_I} replaced by Σ_j a_j p_{e,r_j}.
OrganizedDivisor organize_divisor(const Graph& g, const EdgeCoefficients& coeffs, const ConvexTuple& t);

struct SegmentCheck {
  bool principal = false;
  Rational endpoint_difference;  // f(1) − f(0)
  bool equal_endpoints() const { return principal && endpoint_difference == 0; }
};
// Weighted points on [0,1]; repeated positions are merged.
SegmentCheck segment_principality(const std::vector<std::pair<Rational, std::int64_t>>& points);

// Slopes φ with ∂φ = D on a metric graph (lengths > 0): M solves the weighted
// Laplacian with M(root) = 0 and φ(e) = (M(t(e)) − M(s(e)))/ℓ(e).
std::vector<Rational> metric_flow(const Graph& model, const std::vector<Rational>& lengths, const Divisor& d);
// True iff d is principal on X_Γ (exact, by refining at the support).
bool is_principal(const Graph& g, const TropicalDivisor& d);

struct TropicalReduction {
  TropicalDivisor divisor;
  PseudoDivisor type;
  std::vector<Rational> positions;  // position of the −1 point on each edge of type.edges
};

enum class TropicalRoute { Auto, Subdivision, Lattice };

class LatticeReducer;

// Reduction to the unique (p0,µ)-quasistable representative on X_Γ.
class TropicalReducer {
 public:
  TropicalReducer(Graph g, Index v0, Polarization mu, TropicalRoute route = TropicalRoute::Auto);

  TropicalReduction reduce(const TropicalDivisor& d) const;
  TropicalReduction reduce_by_subdivision(const TropicalDivisor& d) const;
  TropicalReduction reduce_by_lattice(const TropicalDivisor& d) const;

  const Graph& graph() const { return g_; }
  Index root() const { return v0_; }
  const Polarization& polarization() const { return mu_; }

  // Auto uses Γ^(N) while it stays at most this many vertices.
  static constexpr std::size_t kSubdivisionVertexLimit = 48;

 private:
  const LatticeReducer& lattice() const;

  Graph g_;
  Index v0_;
  Polarization mu_;
  TropicalRoute route_;
  struct LazyLattice;
  std::shared_ptr<LazyLattice> lattice_;
};

TropicalReduction qs_reduce_tropical(const Graph& g, Index v0, const Polarization& mu, const TropicalDivisor& d,
                                     TropicalRoute route = TropicalRoute::Auto);

// Same class in Pic(X_Γ); compares quasistable representatives with
// µ = deg·root.
bool trop_equivalent(const Graph& g, const TropicalDivisor& a, const TropicalDivisor& b);

}  // namespace tropabel
