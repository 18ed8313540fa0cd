#pragma once

// Built-in example graphs and the desk-scale self check run by `tropabel selftest`.

#include <cstdint>
#include <string>
#include <vector>

#include "tropabel/graph.hpp"

namespace tropabel {

namespace examples {
// u, v with e1, e2 both u → v.
Graph two_edge_graph();
// u, v with e1, e2, e3 all u → v.
Graph theta_graph();
// v1, v2, v3 with e1: v1→v3, e2: v2→v1, e3, e4: v2→v3; rooted at v3.
Graph casquinha_graph();
}  // namespace examples

struct SelftestCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCase> cases;
  bool ok() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240613;

SelftestReport run_selftest(std::uint64_t seed = kDefaultSeed);

}  // namespace tropabel
