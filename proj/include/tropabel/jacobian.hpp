#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"

namespace tropabel {

// Degenerating coordinate `edge` of a cell to its source (end 0) or target
// (end 1) lands in cell `target`.
struct Face {
  Index edge = 0;
  int end = 0;
  std::size_t target = 0;
  friend bool operator==(const Face&, const Face&) = default;
};

struct Cell {
  PseudoDivisor pd;
  std::string key;
  std::vector<Face> faces;
  std::size_t dim() const { return pd.dim(); }
};

struct JacobianComplex {
  Graph graph;
  Index root = 0;
  Polarization mu;
  std::vector<Cell> cells;               // sorted by (dim, E, D)
  std::map<std::string, std::size_t> by_key;

  std::vector<std::size_t> f_vector() const;
  const Cell* find(const PseudoDivisor& pd) const;
};

// "E=[e1,e2];D=[u:1,v:0]"
std::string cell_key(const Graph& g, const PseudoDivisor& pd);

JacobianComplex build_jacobian(const Graph& g, Index v0, const Polarization& mu, std::int64_t d);

// The cell reached from `pd` by sending the point on `edge` to one end.
PseudoDivisor degenerate(const Graph& g, Index v0, const Polarization& mu, const PseudoDivisor& pd, Index edge,
                         int end);

std::int64_t euler_characteristic(const JacobianComplex& j);

// format ∈ {"json", "dot"}; throws UnsupportedFormat otherwise.
std::string export_complex(const JacobianComplex& j, const std::string& format);

}  // namespace tropabel
