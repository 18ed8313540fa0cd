#include "tropabel/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "tropabel/error.hpp"
#include "tropabel/linalg.hpp"

namespace tropabel {

Graph::Graph(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges, VertexId root) {
  if (vertices.empty()) throw InputError("graph has no vertices");
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw InputError("duplicate vertex id");
  vertices_ = std::move(vertices);
  for (Index i = 0; i < vertices_.size(); ++i) vertex_lookup_.emplace(vertices_[i], i);

  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
  incident_.assign(vertices_.size(), {});
  for (const auto& spec : edges) {
    if (edge_lookup_.count(spec.id)) throw InputError("duplicate edge id '" + spec.id + "'");
    auto s = find_vertex(spec.src);
    auto t = find_vertex(spec.dst);
    if (!s || !t) throw InputError("edge '" + spec.id + "' has an unknown endpoint");
    edge_lookup_.emplace(spec.id, edges_.size());
    incident_[*s].push_back(edges_.size());
    if (*t != *s) incident_[*t].push_back(edges_.size());
    edges_.push_back(Edge{spec.id, *s, *t});
  }
  auto r = find_vertex(root);
  if (!r) throw InputError("root '" + root + "' is not a vertex");
  root_ = *r;
  if (!is_connected_without(*this, kNoIndex, kNoIndex)) throw InputError("graph is not connected");
}

std::optional<Index> Graph::find_vertex(std::string_view id) const {
  auto it = vertex_lookup_.find(std::string(id));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> Graph::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

Index Graph::vertex_index(std::string_view id) const {
  auto v = find_vertex(id);
  if (!v) throw InputError("unknown vertex '" + std::string(id) + "'");
  return *v;
}

Index Graph::edge_index(std::string_view id) const {
  auto e = find_edge(id);
  if (!e) throw InputError("unknown edge '" + std::string(id) + "'");
  return *e;
}

std::int64_t Graph::genus() const {
  return static_cast<std::int64_t>(edges_.size()) - static_cast<std::int64_t>(vertices_.size()) + 1;
}

std::int64_t Graph::valence(Index v) const {
  std::int64_t val = 0;
  for (Index e : incident_[v]) val += edges_[e].is_loop() ? 2 : 1;
  return val;
}

Graph Graph::with_root(Index v) const {
  Graph copy = *this;
  copy.root_ = v;
  return copy;
}

std::vector<Graph::EdgeSpec> Graph::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.id, vertices_[e.src], vertices_[e.dst]});
  return out;
}

Divisor Graph::unit(Index v) const {
  Divisor d(num_vertices());
  d[v] = 1;
  return d;
}

OneChain delta(const Graph& g, const ZeroChain& m) {
  OneChain phi(g.num_edges());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    phi[e] = m[ed.dst] - m[ed.src];
  }
  return phi;
}

Divisor boundary(const Graph& g, const OneChain& phi) {
  Divisor d(g.num_vertices());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    d[ed.dst] += phi[e];
    d[ed.src] -= phi[e];
  }
  return d;
}

Divisor laplacian(const Graph& g, const ZeroChain& m) { return boundary(g, delta(g, m)); }

std::vector<bool> indicator(const Graph& g, const VertexSet& v) {
  std::vector<bool> in(g.num_vertices(), false);
  for (Index x : v) in.at(x) = true;
  return in;
}

VertexSet complement(const Graph& g, const VertexSet& v) {
  auto in = indicator(g, v);
  VertexSet out;
  for (Index x = 0; x < g.num_vertices(); ++x)
    if (!in[x]) out.push_back(x);
  return out;
}

Cut cut(const Graph& g, const VertexSet& v) {
  auto in = indicator(g, v);
  Cut c{{}, 0};
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (in[ed.src] != in[ed.dst]) c.edges.push_back(e);
  }
  c.size = static_cast<std::int64_t>(c.edges.size());
  return c;
}

SpanningTree bfs_tree(const Graph& g) {
  const std::size_t n = g.num_vertices();
  SpanningTree t{std::vector<Index>(n, kNoIndex), std::vector<Index>(n, kNoIndex), {},
                 std::vector<bool>(g.num_edges(), false)};
  std::vector<bool> seen(n, false);
  std::deque<Index> queue{g.root()};
  seen[g.root()] = true;
  while (!queue.empty()) {
    Index v = queue.front();
    queue.pop_front();
    t.order.push_back(v);
    for (Index e : g.incident(v)) {
      const Edge& ed = g.edge(e);
      Index w = ed.src == v ? ed.dst : ed.src;
      if (seen[w]) continue;
      seen[w] = true;
      t.parent_edge[w] = e;
      t.parent_vertex[w] = v;
      t.in_tree[e] = true;
      queue.push_back(w);
    }
  }
  return t;
}

namespace {

// Signed edge path from the root to v along the tree; sign +1 where the
// walk follows the edge orientation.
OneChain root_path(const Graph& g, const SpanningTree& t, Index v) {
  OneChain p(g.num_edges());
  while (t.parent_edge[v] != kNoIndex) {
    Index e = t.parent_edge[v];
    // walking parent -> v
    p[e] += g.edge(e).dst == v ? 1 : -1;
    v = t.parent_vertex[v];
  }
  return p;
}

}  // namespace

std::vector<Cycle> cycle_basis(const Graph& g) {
  SpanningTree t = bfs_tree(g);
  std::vector<Cycle> basis;
  for (Index e = 0; e < g.num_edges(); ++e) {
    if (t.in_tree[e]) continue;
    const Edge& ed = g.edge(e);
    // e from s to t, then back to the root and down to s.
    Cycle c = root_path(g, t, ed.src) - root_path(g, t, ed.dst);
    c[e] += 1;
    basis.push_back(std::move(c));
  }
  return basis;
}

std::string exceptional_vertex_name(const Graph& g, Index e) { return g.edge(e).id + "@mid"; }

namespace {

Subdivision build_subdivision(const Graph& g, const std::vector<std::size_t>& pieces, bool mid_names) {
  std::vector<VertexId> vertices = g.vertices();
  std::vector<Graph::EdgeSpec> specs;
  // Parent-side description of each chain by id; indices resolved after sorting.
  std::vector<std::vector<VertexId>> chain_ids(g.num_edges());
  std::vector<std::vector<EdgeId>> chain_edge_ids(g.num_edges());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const std::size_t n = pieces[e];
    chain_ids[e].push_back(g.vertex_id(ed.src));
    for (std::size_t k = 1; k < n; ++k) {
      VertexId x = mid_names ? ed.id + "@mid" : ed.id + "@" + std::to_string(k);
      vertices.push_back(x);
      chain_ids[e].push_back(x);
    }
    chain_ids[e].push_back(g.vertex_id(ed.dst));
    for (std::size_t k = 1; k <= n; ++k) {
      EdgeId id = n == 1 ? ed.id : ed.id + "#" + std::to_string(k);
      specs.push_back({id, chain_ids[e][k - 1], chain_ids[e][k]});
      chain_edge_ids[e].push_back(id);
    }
  }
  std::set<VertexId> unique_vertices(vertices.begin(), vertices.end());
  if (unique_vertices.size() != vertices.size())
    throw InputError("subdivision vertex names collide with existing vertex ids");

  Subdivision s{g, Graph(vertices, specs, g.vertex_id(g.root())), {}, {}, {}, {}, {}};
  const Graph& r = s.refined;
  s.vertex_map.resize(g.num_vertices());
  for (Index v = 0; v < g.num_vertices(); ++v) s.vertex_map[v] = r.vertex_index(g.vertex_id(v));
  s.edge_map.assign(r.num_edges(), kNoIndex);
  s.exceptional_parent.assign(r.num_vertices(), kNoIndex);
  s.chain_vertices.resize(g.num_edges());
  s.chain_edges.resize(g.num_edges());
  for (Index e = 0; e < g.num_edges(); ++e) {
    for (const auto& x : chain_ids[e]) s.chain_vertices[e].push_back(r.vertex_index(x));
    for (const auto& id : chain_edge_ids[e]) {
      Index re = r.edge_index(id);
      s.chain_edges[e].push_back(re);
      s.edge_map[re] = e;
    }
    for (std::size_t k = 1; k + 1 < s.chain_vertices[e].size(); ++k)
      s.exceptional_parent[s.chain_vertices[e][k]] = e;
  }
  return s;
}

}  // namespace

Subdivision subdivide_uniform(const Graph& g, std::size_t n) {
  if (n == 0) throw InputError("subdivision order must be >= 1");
  return build_subdivision(g, std::vector<std::size_t>(g.num_edges(), n), false);
}

Subdivision subdivide_edges(const Graph& g, const EdgeSet& edges) {
  std::vector<std::size_t> pieces(g.num_edges(), 1);
  for (Index e : edges) pieces.at(e) = 2;
  return build_subdivision(g, pieces, true);
}

bool is_connected_without(const Graph& g, Index removed_vertex, Index removed_edge) {
  const std::size_t n = g.num_vertices();
  Index start = 0;
  if (start == removed_vertex) start = 1;
  if (start >= n) return true;
  std::vector<bool> seen(n, false);
  std::vector<Index> stack{start};
  seen[start] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index e : g.incident(v)) {
      if (e == removed_edge) continue;
      const Edge& ed = g.edge(e);
      Index w = ed.src == v ? ed.dst : ed.src;
      if (w == removed_vertex || seen[w]) continue;
      seen[w] = true;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached == n - (removed_vertex == kNoIndex ? 0 : 1);
}

bool is_biconnected(const Graph& g) {
  if (g.num_vertices() == 1) return true;
  if (!is_connected_without(g, kNoIndex, kNoIndex)) return false;
  for (Index v = 0; v < g.num_vertices(); ++v)
    if (!is_connected_without(g, v, kNoIndex)) return false;
  for (Index e = 0; e < g.num_edges(); ++e)
    if (!g.edge(e).is_loop() && !is_connected_without(g, kNoIndex, e)) return false;
  return true;
}

Integer spanning_tree_count(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 1) return 1;
  // Reduced Laplacian: drop the last row and column.
  linalg::Matrix lap = linalg::zeros(n - 1, n - 1);
  for (const Edge& ed : g.edges()) {
    if (ed.is_loop()) continue;
    auto add = [&](Index i, Index j, int val) {
      if (i < n - 1 && j < n - 1) lap[i][j] += val;
    };
    add(ed.src, ed.src, 1);
    add(ed.dst, ed.dst, 1);
    add(ed.src, ed.dst, -1);
    add(ed.dst, ed.src, -1);
  }
  Rational det = linalg::determinant(std::move(lap));
  return det.get_num();
}

Graph flip_edges(const Graph& g, const EdgeSet& flipped) {
  auto specs = g.edge_specs();
  for (Index e : flipped) std::swap(specs.at(e).src, specs.at(e).dst);
  return Graph(g.vertices(), specs, g.vertex_id(g.root()));
}

}  // namespace tropabel
