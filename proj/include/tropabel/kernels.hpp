#pragma once

// Integer kernels behind the quasistability checks. Each data-parallel scan
// has a serial reference and an OpenMP version that must return the same
// answer; both are exercised by the tests and compared in bench/.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tropabel/graph.hpp"

namespace tropabel::kernels {

// β scaled by 2L, with L a common denominator of the polarization:
//   scaled(V) = Σ_{v∈V} weight[v] + cut_weight·δ_V,
//   weight[v] = 2L·(D(v) − µ(v)), cut_weight = L.
struct BetaProblem {
  std::size_t n = 0;
  std::vector<std::pair<Index, Index>> edges;  // non-loop edges only
  std::vector<std::int64_t> weight;
  std::int64_t cut_weight = 1;
  Index root = 0;
};

struct Candidate {
  VertexSet set;
  std::int64_t value = 0;  // scaled β
};

// (value asc, |set| desc, lexicographic asc) -- the canonical preference
// used to pick violators and minimizers.
bool better(const Candidate& a, const Candidate& b);

inline constexpr std::size_t kExhaustiveLimit = 16;

std::int64_t scaled_beta(const BetaProblem& p, std::uint64_t mask);
std::int64_t scaled_beta(const BetaProblem& p, const VertexSet& set);

// A proper subset V violates quasistability when β(V) < 0, or β(V) = 0 and
// the root lies in V. These return the preferred violator.
std::optional<Candidate> best_violator_serial(const BetaProblem& p);
std::optional<Candidate> best_violator_parallel(const BetaProblem& p);
std::optional<Candidate> best_violator_mincut(const BetaProblem& p);
// Dispatches on p.n: exhaustive (OpenMP) up to kExhaustiveLimit, min-cut above.
std::optional<Candidate> best_violator(const BetaProblem& p);

// Early-exit check; true when no proper subset violates.
bool no_violator(const BetaProblem& p);

// Preferred minimizer of β over subsets (∅ allowed) avoiding `excluded`.
Candidate minimizer_avoiding_serial(const BetaProblem& p, Index excluded);
Candidate minimizer_avoiding_mincut(const BetaProblem& p, Index excluded);
Candidate minimizer_avoiding(const BetaProblem& p, Index excluded);

// Inclusion-minimal minimizer of β over subsets containing `required` and
// avoiding `excluded` (unique, since minimizers are closed under ∩).
Candidate least_minimizer_serial(const BetaProblem& p, const VertexSet& required, Index excluded);
Candidate least_minimizer_mincut(const BetaProblem& p, const VertexSet& required, Index excluded);
Candidate least_minimizer(const BetaProblem& p, const VertexSet& required, Index excluded);

// Bounded oracle: every M ∈ [−B,B]^V with M(root) = 0 such that
// weight + 2L·Δ(M) has no violator. Returned in increasing mixed-radix order.
struct OracleProblem {
  BetaProblem base;
  std::vector<std::vector<std::int64_t>> laplacian;  // ∂δ as a matrix
  std::int64_t bound = 0;
};
std::vector<std::vector<std::int64_t>> oracle_scan_serial(const OracleProblem& p);
std::vector<std::vector<std::int64_t>> oracle_scan_parallel(const OracleProblem& p);
// Same answer by depth-first search: potentials are assigned in BFS order and a
// branch is cut once a vertex whose closed neighbourhood is fixed already
// violates on its singleton or co-singleton (both depend on that vertex only).
std::vector<std::vector<std::int64_t>> oracle_scan_pruned(const OracleProblem& p);

// Condition-(2) style sweep: for each row r (a subset W) find whether
// lo[r] < base[r] + Σ_e term[r][e][j(e)] <= hi[r] for every j: E -> {0..m-1}.
// Returns, per row, the number of functions j violating either side.
struct SeparableSweep {
  std::size_t edges = 0;
  std::size_t choices = 0;
  std::vector<std::int64_t> base, lo, hi;
  std::vector<std::vector<std::vector<std::int64_t>>> term;  // [row][edge][choice]
};
std::vector<std::uint64_t> sweep_serial(const SeparableSweep& s);
std::vector<std::uint64_t> sweep_parallel(const SeparableSweep& s);

}  // namespace tropabel::kernels
