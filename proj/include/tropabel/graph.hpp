#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tropabel/rational.hpp"

namespace tropabel {

using VertexId = std::string;
using EdgeId = std::string;
using Index = std::size_t;

inline constexpr Index kNoIndex = static_cast<Index>(-1);

// Integer-valued function on vertices (Tag = VertexTag) or edges (EdgeTag).
template <class Tag>
struct Chain {
  std::vector<std::int64_t> c;

  Chain() = default;
  explicit Chain(std::size_t n) : c(n, 0) {}
  explicit Chain(std::vector<std::int64_t> values) : c(std::move(values)) {}

  std::size_t size() const { return c.size(); }
  std::int64_t& operator[](std::size_t i) { return c[i]; }
  std::int64_t operator[](std::size_t i) const { return c[i]; }

  std::int64_t degree() const {
    std::int64_t s = 0;
    for (auto x : c) s += x;
    return s;
  }
  bool is_zero() const {
    for (auto x : c)
      if (x != 0) return false;
    return true;
  }

  Chain& operator+=(const Chain& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  Chain& operator-=(const Chain& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator-(Chain a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend Chain operator*(std::int64_t k, Chain a) {
    for (auto& x : a.c) x *= k;
    return a;
  }
  friend bool operator==(const Chain&, const Chain&) = default;
  friend auto operator<=>(const Chain&, const Chain&) = default;
};

struct VertexTag {};
struct EdgeTag {};

// C_0(Γ,Z) is identified with Div(Γ).
using Divisor = Chain<VertexTag>;
using ZeroChain = Divisor;
using OneChain = Chain<EdgeTag>;
// Signed edge incidence with values in {-1,0,1}.
using Cycle = OneChain;

// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<Index>;
using EdgeSet = std::vector<Index>;

struct Edge {
  EdgeId id;
  Index src;
  Index dst;
  bool is_loop() const { return src == dst; }
};

// Connected directed multigraph with root v0. Vertices and edges are kept
// sorted by id, so indices give the canonical iteration order.
class Graph {
 public:
  struct EdgeSpec {
    EdgeId id;
    VertexId src;
    VertexId dst;
  };

  Graph() = default;
  Graph(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges, VertexId root);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const VertexId& vertex_id(Index v) const { return vertices_[v]; }
  const Edge& edge(Index e) const { return edges_[e]; }
  Index root() const { return root_; }

  std::optional<Index> find_vertex(std::string_view id) const;
  std::optional<Index> find_edge(std::string_view id) const;
  Index vertex_index(std::string_view id) const;  // throws InputError
  Index edge_index(std::string_view id) const;    // throws InputError

  // First Betti number |E| - |V| + 1.
  std::int64_t genus() const;
  // Loops count twice.
  std::int64_t valence(Index v) const;
  // Edges incident to v (a loop appears once).
  const std::vector<Index>& incident(Index v) const { return incident_[v]; }

  Graph with_root(Index v) const;
  std::vector<EdgeSpec> edge_specs() const;

  Divisor zero_divisor() const { return Divisor(num_vertices()); }
  OneChain zero_flow() const { return OneChain(num_edges()); }
  Divisor unit(Index v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.root_ == b.root_ && a.edge_specs() == b.edge_specs();
  }

 private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  Index root_ = 0;
  std::unordered_map<std::string, Index> vertex_lookup_;
  std::unordered_map<std::string, Index> edge_lookup_;
  std::vector<std::vector<Index>> incident_;
};

inline bool operator==(const Graph::EdgeSpec& a, const Graph::EdgeSpec& b) {
  return a.id == b.id && a.src == b.src && a.dst == b.dst;
}

// δ(v) = Σ_{t(e)=v} e − Σ_{s(e)=v} e, extended linearly.
OneChain delta(const Graph& g, const ZeroChain& m);
// ∂(e) = t(e) − s(e).
Divisor boundary(const Graph& g, const OneChain& phi);
// ∂δ(M); the graph Laplacian applied to M.
Divisor laplacian(const Graph& g, const ZeroChain& m);

struct Cut {
  EdgeSet edges;       // E(V, V^c), loops excluded
  std::int64_t size;   // δ_V
};
Cut cut(const Graph& g, const VertexSet& v);

std::vector<bool> indicator(const Graph& g, const VertexSet& v);
VertexSet complement(const Graph& g, const VertexSet& v);

// BFS spanning tree from the root, scanning incident edges in index order.
struct SpanningTree {
  std::vector<Index> parent_edge;    // kNoIndex at the root
  std::vector<Index> parent_vertex;  // kNoIndex at the root
  std::vector<Index> order;          // BFS order, root first
  std::vector<bool> in_tree;         // per edge
};
SpanningTree bfs_tree(const Graph& g);

// Fundamental cycles of bfs_tree(g), one per non-tree edge in index order;
// each cycle traverses its non-tree edge along the orientation.
std::vector<Cycle> cycle_basis(const Graph& g);

struct Subdivision {
  Graph parent;
  Graph refined;
  std::vector<Index> vertex_map;                 // F: parent vertex -> refined vertex
  std::vector<Index> edge_map;                   // G: refined edge -> parent edge
  std::vector<std::vector<Index>> chain_vertices;  // x^e_0..x^e_n per parent edge
  std::vector<std::vector<Index>> chain_edges;     // e_1..e_n per parent edge
  std::vector<Index> exceptional_parent;         // refined vertex -> parent edge or kNoIndex

  bool is_exceptional(Index refined_vertex) const { return exceptional_parent[refined_vertex] != kNoIndex; }
};

// Γ^(n): n-1 new vertices "e@k" on every edge, edges "e#k" oriented
// s(e) -> e@1 -> ... -> t(e). n = 1 returns a relabel-free copy.
Subdivision subdivide_uniform(const Graph& g, std::size_t n);
// Γ^E: one vertex "e@mid" on each edge of E, edges "e#1", "e#2".
Subdivision subdivide_edges(const Graph& g, const EdgeSet& edges);

std::string exceptional_vertex_name(const Graph& g, Index e);  // "e@mid"

bool is_connected_without(const Graph& g, Index removed_vertex, Index removed_edge);
// 2-vertex-connected and bridgeless; a single vertex counts as biconnected.
bool is_biconnected(const Graph& g);
// Kirchhoff count with loops ignored.
Integer spanning_tree_count(const Graph& g);

Graph flip_edges(const Graph& g, const EdgeSet& flipped);

}  // namespace tropabel
