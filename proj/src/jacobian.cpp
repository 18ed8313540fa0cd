#include "tropabel/jacobian.hpp"

#include <algorithm>
#include <sstream>

#include "tropabel/error.hpp"
#include "tropabel/io.hpp"

namespace tropabel {

std::vector<std::size_t> JacobianComplex::f_vector() const {
  std::vector<std::size_t> f;
  for (const auto& c : cells) {
    if (f.size() <= c.dim()) f.resize(c.dim() + 1, 0);
    ++f[c.dim()];
  }
  return f;
}

const Cell* JacobianComplex::find(const PseudoDivisor& pd) const {
  auto it = by_key.find(cell_key(graph, pd));
  return it == by_key.end() ? nullptr : &cells[it->second];
}

std::string cell_key(const Graph& g, const PseudoDivisor& pd) {
  std::string key = "E=[";
  for (std::size_t i = 0; i < pd.edges.size(); ++i) key += (i ? "," : "") + g.edge(pd.edges[i]).id;
  key += "];D=[";
  for (Index v = 0; v < g.num_vertices(); ++v)
    key += (v ? "," : "") + g.vertex_id(v) + ":" + std::to_string(pd.base[v]);
  return key + "]";
}

PseudoDivisor degenerate(const Graph& g, Index v0, const Polarization& mu, const PseudoDivisor& pd, Index edge,
                         int end) {
  PseudoDivisor face = pd;
  auto it = std::find(face.edges.begin(), face.edges.end(), edge);
  if (it == face.edges.end()) throw InputError("edge is not a coordinate of the cell");
  face.edges.erase(it);
  face.base[end == 0 ? g.edge(edge).src : g.edge(edge).dst] -= 1;
  Subdivision s = subdivide_edges(g, face.edges);
  QsReduction red = qs_reduce(s.refined, s.vertex_map[v0], induced_polarization(s, mu), expand(s, face));
  try {
    return collapse(s, red.divisor);
  } catch (const InputError&) {
    throw AssertionFailure("degenerated cell does not reduce to a pseudo-divisor on the same subdivision");
  }
}

JacobianComplex build_jacobian(const Graph& g, Index v0, const Polarization& mu, std::int64_t d) {
  JacobianComplex j{g, v0, mu, {}, {}};
  for (auto& pd : enumerate_quasistable(g, v0, mu, d)) {
    std::string key = cell_key(g, pd);
    j.by_key.emplace(key, j.cells.size());
    j.cells.push_back(Cell{std::move(pd), std::move(key), {}});
  }
  const auto count = static_cast<std::int64_t>(j.cells.size());
  std::vector<std::string> failure(j.cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    Cell& c = j.cells[static_cast<std::size_t>(i)];
    try {
      for (Index e : c.pd.edges)
        for (int end : {0, 1}) {
          PseudoDivisor face = degenerate(g, v0, mu, c.pd, e, end);
          auto it = j.by_key.find(cell_key(g, face));
          if (it == j.by_key.end()) throw AssertionFailure("face " + cell_key(g, face) + " is not a cell");
          c.faces.push_back(Face{e, end, it->second});
        }
    } catch (const std::exception& ex) {
      failure[static_cast<std::size_t>(i)] = ex.what();
    }
  }
  for (const auto& f : failure)
    if (!f.empty()) throw AssertionFailure(f);
  return j;
}

std::int64_t euler_characteristic(const JacobianComplex& j) {
  std::int64_t chi = 0;
  for (const auto& c : j.cells) chi += c.dim() % 2 == 0 ? 1 : -1;
  return chi;
}

std::string export_complex(const JacobianComplex& j, const std::string& format) {
  const Graph& g = j.graph;
  if (format == "json") {
    io::Json cells = io::Json::array();
    for (const auto& c : j.cells) {
      io::Json cell = io::pseudo_divisor_to_json(g, c.pd);
      cell["key"] = c.key;
      cell["dim"] = c.dim();
      io::Json faces = io::Json::array();
      for (const auto& f : c.faces)
        faces.push_back({{"edge", g.edge(f.edge).id}, {"end", f.end == 0 ? "src" : "dst"}, {"cell", f.target}});
      cell["faces"] = std::move(faces);
      cells.push_back(std::move(cell));
    }
    io::Json out{{"cells", std::move(cells)},
                 {"f_vector", j.f_vector()},
                 {"euler_characteristic", euler_characteristic(j)}};
    return out.dump(2) + "\n";
  }
  if (format == "dot") {
    std::ostringstream os;
    os << "digraph jacobian {\n";
    for (std::size_t i = 0; i < j.cells.size(); ++i)
      os << "  c" << i << " [label=\"" << j.cells[i].key << "\"];\n";
    for (std::size_t i = 0; i < j.cells.size(); ++i)
      for (const auto& f : j.cells[i].faces)
        os << "  c" << i << " -> c" << f.target << " [label=\"" << g.edge(f.edge).id << (f.end == 0 ? "@0" : "@1")
           << "\"];\n";
    os << "}\n";
    return os.str();
  }
  throw UnsupportedFormat("unsupported export format: " + format);
}

}  // namespace tropabel
