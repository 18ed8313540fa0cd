#include "tropabel/tropical.hpp"

#include <algorithm>
#include <mutex>

#include "tropabel/error.hpp"
#include "tropabel/lattice.hpp"
#include "tropabel/linalg.hpp"

namespace tropabel {

// --- TropicalDivisor -------------------------------------------------------

TropicalDivisor::TropicalDivisor(const Graph& g) : vertices_(g.num_vertices()) {}

TropicalDivisor::TropicalDivisor(const Graph& g, const Divisor& d) : vertices_(d) {
  if (d.size() != g.num_vertices()) throw InputError("divisor size does not match the graph");
}

void TropicalDivisor::add_vertex(Index v, std::int64_t w) { vertices_[v] += w; }

void TropicalDivisor::add_point(const Graph& g, Index e, const Rational& pos, std::int64_t w) {
  if (pos < 0 || pos > 1) throw InputError("point position " + to_string(pos) + " outside [0,1]");
  if (w == 0) return;
  if (pos == 0) {
    vertices_[g.edge(e).src] += w;
    return;
  }
  if (pos == 1) {
    vertices_[g.edge(e).dst] += w;
    return;
  }
  auto key = PointKey{e, pos};
  auto& slot = interior_[key];
  slot += w;
  if (slot == 0) interior_.erase(key);
}

std::int64_t TropicalDivisor::degree() const {
  std::int64_t d = vertices_.degree();
  for (const auto& [k, w] : interior_) d += w;
  return d;
}

std::int64_t TropicalDivisor::common_denominator() const {
  std::int64_t l = 1;
  for (const auto& [k, w] : interior_) l = lcm64(l, to_int64(k.second.get_den()));
  return l;
}

TropicalDivisor& TropicalDivisor::operator+=(const TropicalDivisor& o) {
  vertices_ += o.vertices_;
  for (const auto& [k, w] : o.interior_) {
    auto& slot = interior_[k];
    slot += w;
    if (slot == 0) interior_.erase(k);
  }
  return *this;
}

TropicalDivisor& TropicalDivisor::operator-=(const TropicalDivisor& o) { return *this += o.scaled(-1); }

TropicalDivisor TropicalDivisor::scaled(std::int64_t k) const {
  TropicalDivisor out = *this;
  out.vertices_ = k * out.vertices_;
  if (k == 0) {
    out.interior_.clear();
    return out;
  }
  for (auto& [key, w] : out.interior_) w *= k;
  return out;
}

// --- Convex tuples and index sets ------------------------------------------

ConvexTuple::ConvexTuple(std::vector<Rational> t) : t_(std::move(t)) {
  Rational sum = 0;
  for (const auto& x : t_) {
    if (x < 0) throw InputError("convex tuple entries must be >= 0");
    sum += x;
  }
  if (sum > 1) throw InputError("convex tuple entries must sum to at most 1");
}

Rational ConvexTuple::t(std::size_t j) const {
  if (j == 0) return 0;
  if (j <= t_.size()) return t_[j - 1];
  Rational rest = 1;
  for (const auto& x : t_) rest -= x;
  return rest;
}

Rational ConvexTuple::r(std::size_t j) const {
  if (j > t_.size()) return 1;
  Rational s = 0;
  for (std::size_t i = 0; i < j; ++i) s += t_[i];
  return s;
}

IndexSet::IndexSet(std::initializer_list<int> m) : IndexSet(std::vector<int>(m)) {}

IndexSet::IndexSet(std::vector<int> m) : members(std::move(m)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool IndexSet::contains(int j) const { return std::binary_search(members.begin(), members.end(), j); }

void IndexSet::validate(std::size_t n) const {
  for (int j : members)
    if (j != -1 && (j < 1 || j > static_cast<int>(n)))
      throw InputError("index " + std::to_string(j) + " outside {-1,1,...," + std::to_string(n) + "}");
}

bool AdmissibleSequence::is_admissible() const {
  std::int64_t sum = 0;
  const std::int64_t bound = level < 0 ? -level : level;
  for (auto x : a) {
    if (x != 0 && x != level && x != -level) return false;
    sum += x;
  }
  if (sum != level) return false;
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::int64_t w = 0;
    for (std::size_t t = s; t < a.size(); ++t) {
      w += a[t];
      if (w > bound || w < -bound) return false;
    }
  }
  return true;
}

Rational d_of(const IndexSet& i, const ConvexTuple& t) {
  i.validate(t.n());
  Rational s = 0;
  for (int j : i.members)
    if (j != -1) s += t.t(static_cast<std::size_t>(j));
  return i.far_end() ? Rational(1) - s : s;
}

AdmissibleSequence organize_segment(std::int64_t a, const IndexSet& i, std::size_t n) {
  i.validate(n);
  AdmissibleSequence out{a, std::vector<std::int64_t>(n + 2, 0)};
  if (i.far_end()) {
    // Measured from t(e): reflect, organize −a near s(e), then add a at both ends.
    IndexSet rest(std::vector<int>(i.members.begin() + 1, i.members.end()));
    AdmissibleSequence inner = organize_segment(-a, rest, n);
    out.a = inner.a;
    out.a.front() += a;
    out.a.back() += a;
    return out;
  }
  if (i.members.empty()) {
    out.a[0] = a;
    return out;
  }
  std::vector<int> shifted;
  for (int j : i.members)
    if (j != 1) shifted.push_back(j - 1);
  AdmissibleSequence inner = organize_segment(a, IndexSet(std::move(shifted)), n - 1);
  if (i.contains(1)) {
    // The first step t_1 is taken; keep the inner arrangement after r_1.
    out.a[0] = 0;
    std::copy(inner.a.begin(), inner.a.end(), out.a.begin() + 1);
  } else {
    out.a[0] = a;
    out.a[1] = inner.a[0] - a;
    std::copy(inner.a.begin() + 1, inner.a.end(), out.a.begin() + 2);
  }
  return out;
}

TropicalDivisor coefficient_divisor(const Graph& g, const EdgeCoefficients& coeffs, const ConvexTuple& t) {
  TropicalDivisor d(g);
  for (const auto& [key, w] : coeffs) d.add_point(g, key.first, d_of(key.second, t), w);
  return d;
}

OrganizedDivisor organize_divisor(const Graph& g, const EdgeCoefficients& coeffs, const ConvexTuple& t) {
  OrganizedDivisor out{TropicalDivisor(g), {}};
  for (const auto& [key, w] : coeffs) {
    AdmissibleSequence seq = organize_segment(w, key.second, t.n());
    for (std::size_t j = 0; j < seq.a.size(); ++j) out.divisor.add_point(g, key.first, t.r(j), seq.a[j]);
    out.table.emplace(key, std::move(seq));
  }
  return out;
}

SegmentCheck segment_principality(const std::vector<std::pair<Rational, std::int64_t>>& points) {
  std::map<Rational, std::int64_t> merged{{Rational(0), 0}, {Rational(1), 0}};
  for (const auto& [q, w] : points) {
    if (q < 0 || q > 1) throw InputError("segment position outside [0,1]");
    merged[q] += w;
  }
  std::vector<std::pair<Rational, std::int64_t>> pts(merged.begin(), merged.end());
  SegmentCheck out;
  std::int64_t slope = -pts[0].second;
  Rational diff = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    diff += slope * (pts[i].first - pts[i - 1].first);
    if (i + 1 < pts.size()) slope -= pts[i].second;
  }
  out.principal = pts.back().second == slope;
  out.endpoint_difference = diff;
  return out;
}

std::vector<Rational> metric_flow(const Graph& model, const std::vector<Rational>& lengths, const Divisor& d) {
  const std::size_t n = model.num_vertices();
  if (d.degree() != 0) throw InputError("metric_flow needs a degree-0 divisor");
  std::vector<Index> free;
  std::vector<std::size_t> slot(n, kNoIndex);
  for (Index v = 0; v < n; ++v)
    if (v != model.root()) {
      slot[v] = free.size();
      free.push_back(v);
    }
  linalg::Matrix lap = linalg::zeros(free.size(), free.size());
  linalg::Vector rhs(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) rhs[i] = d[free[i]];
  for (Index e = 0; e < model.num_edges(); ++e) {
    const Edge& ed = model.edge(e);
    if (ed.is_loop()) continue;
    if (lengths[e] <= 0) throw InputError("metric_flow needs positive edge lengths");
    Rational c = Rational(1) / lengths[e];
    auto add = [&](Index a, Index b, const Rational& val) {
      if (slot[a] != kNoIndex && slot[b] != kNoIndex) lap[slot[a]][slot[b]] += val;
    };
    add(ed.src, ed.src, c);
    add(ed.dst, ed.dst, c);
    add(ed.src, ed.dst, -c);
    add(ed.dst, ed.src, -c);
  }
  std::vector<Rational> m(n, 0);
  if (!free.empty()) {
    auto x = linalg::solve(std::move(lap), std::move(rhs));
    ensure(x.has_value(), "weighted Laplacian system is inconsistent");
    for (std::size_t i = 0; i < free.size(); ++i) m[free[i]] = (*x)[i];
  }
  std::vector<Rational> phi(model.num_edges(), 0);
  for (Index e = 0; e < model.num_edges(); ++e) {
    const Edge& ed = model.edge(e);
    if (!ed.is_loop()) phi[e] = (m[ed.dst] - m[ed.src]) / lengths[e];
  }
  return phi;
}

bool is_principal(const Graph& g, const TropicalDivisor& d) {
  if (d.degree() != 0) return false;
  // Model graph: cut every edge at the interior support points.
  std::vector<std::vector<Rational>> cuts(g.num_edges());
  for (const auto& [key, w] : d.interior()) cuts[key.first].push_back(key.second);
  std::vector<VertexId> vertices = g.vertices();
  std::vector<Graph::EdgeSpec> specs;
  std::vector<Rational> lengths_by_id;
  std::vector<std::pair<std::string, std::int64_t>> weights;
  std::map<std::string, Rational> length_of;
  for (Index e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    std::vector<Rational> pos = cuts[e];
    std::sort(pos.begin(), pos.end());
    std::string prev = g.vertex_id(ed.src);
    Rational prev_pos = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      std::string x = ed.id + "@" + std::to_string(k + 1);
      vertices.push_back(x);
      std::string id = ed.id + "#" + std::to_string(k + 1);
      specs.push_back({id, prev, x});
      length_of[id] = pos[k] - prev_pos;
      weights.emplace_back(x, d.interior().at({e, pos[k]}));
      prev = x;
      prev_pos = pos[k];
    }
    std::string id = pos.empty() ? ed.id : ed.id + "#" + std::to_string(pos.size() + 1);
    specs.push_back({id, prev, g.vertex_id(ed.dst)});
    length_of[id] = Rational(1) - prev_pos;
  }
  Graph model(vertices, specs, g.vertex_id(g.root()));
  Divisor md(model.num_vertices());
  for (Index v = 0; v < g.num_vertices(); ++v) md[model.vertex_index(g.vertex_id(v))] = d.vertex_part()[v];
  for (const auto& [id, w] : weights) md[model.vertex_index(id)] = w;
  std::vector<Rational> lengths(model.num_edges());
  for (Index e = 0; e < model.num_edges(); ++e) lengths[e] = length_of.at(model.edge(e).id);
  for (const auto& slope : metric_flow(model, lengths, md))
    if (!is_integer(slope)) return false;
  return true;
}

// --- Reduction ---------------------------------------------------------------

struct TropicalReducer::LazyLattice {
  std::once_flag once;
  std::unique_ptr<LatticeReducer> reducer;
};

TropicalReducer::TropicalReducer(Graph g, Index v0, Polarization mu, TropicalRoute route)
    : g_(std::move(g)), v0_(v0), mu_(std::move(mu)), route_(route), lattice_(std::make_shared<LazyLattice>()) {}

const LatticeReducer& TropicalReducer::lattice() const {
  std::call_once(lattice_->once, [&] { lattice_->reducer = std::make_unique<LatticeReducer>(g_, v0_, mu_); });
  return *lattice_->reducer;
}

TropicalReduction TropicalReducer::reduce(const TropicalDivisor& d) const {
  switch (route_) {
    case TropicalRoute::Subdivision:
      return reduce_by_subdivision(d);
    case TropicalRoute::Lattice:
      return reduce_by_lattice(d);
    case TropicalRoute::Auto:
      break;
  }
  const std::int64_t n = d.common_denominator();
  const std::size_t refined = g_.num_vertices() + g_.num_edges() * static_cast<std::size_t>(n - 1);
  return refined <= kSubdivisionVertexLimit ? reduce_by_subdivision(d) : reduce_by_lattice(d);
}

TropicalReduction TropicalReducer::reduce_by_subdivision(const TropicalDivisor& d) const {
  if (d.degree() != mu_.degree) throw InputError("divisor degree differs from polarization degree");
  const std::int64_t n = d.common_denominator();
  Subdivision s = subdivide_uniform(g_, static_cast<std::size_t>(n));
  Divisor refined(s.refined.num_vertices());
  for (Index v = 0; v < g_.num_vertices(); ++v) refined[s.vertex_map[v]] += d.vertex_part()[v];
  for (const auto& [key, w] : d.interior()) {
    Rational k = key.second * n;
    refined[s.chain_vertices[key.first][to_int64_exact(k)]] += w;
  }
  QsReduction red = qs_reduce(s.refined, s.vertex_map[v0_], induced_polarization(s, mu_), refined);

  TropicalReduction out{TropicalDivisor(g_), PseudoDivisor{{}, Divisor(g_.num_vertices())}, {}};
  for (Index v = 0; v < g_.num_vertices(); ++v) {
    out.type.base[v] = red.divisor[s.vertex_map[v]];
    out.divisor.add_vertex(v, out.type.base[v]);
  }
  for (Index e = 0; e < g_.num_edges(); ++e) {
    const auto& chain = s.chain_vertices[e];
    for (std::size_t k = 1; k + 1 < chain.size(); ++k) {
      std::int64_t w = red.divisor[chain[k]];
      if (w == 0) continue;
      ensure(w == -1, "quasistable refinement carries weight " + std::to_string(w) + " inside an edge");
      ensure(out.type.edges.empty() || out.type.edges.back() != e, "two exceptional points on one edge");
      Rational pos = make_rational(static_cast<std::int64_t>(k), n);
      out.type.edges.push_back(e);
      out.positions.push_back(pos);
      out.divisor.add_point(g_, e, pos, -1);
    }
  }
  return out;
}

TropicalReduction TropicalReducer::reduce_by_lattice(const TropicalDivisor& d) const {
  if (d.degree() != mu_.degree) throw InputError("divisor degree differs from polarization degree");
  return lattice().reduce(d);
}

TropicalReduction qs_reduce_tropical(const Graph& g, Index v0, const Polarization& mu, const TropicalDivisor& d,
                                     TropicalRoute route) {
  return TropicalReducer(g, v0, mu, route).reduce(d);
}

bool trop_equivalent(const Graph& g, const TropicalDivisor& a, const TropicalDivisor& b) {
  if (a.degree() != b.degree()) return false;
  std::vector<Rational> vals(g.num_vertices(), 0);
  vals[g.root()] = a.degree();
  TropicalReducer reducer(g, g.root(), Polarization::from_values(g, vals));
  return reducer.reduce(a).divisor == reducer.reduce(b).divisor;
}

}  // namespace tropabel
