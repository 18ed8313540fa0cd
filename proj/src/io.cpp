#include "tropabel/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "tropabel/error.hpp"

namespace tropabel::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

Rational as_rational(const Json& j, const char* what) {
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError(std::string(what) + " must be an integer or a rational string");
}

}  // namespace

Json graph_to_json(const Graph& g) {
  Json out;
  out["vertices"] = g.vertices();
  Json edges = Json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"id", e.id}, {"src", g.vertex_id(e.src)}, {"dst", g.vertex_id(e.dst)}});
  out["edges"] = std::move(edges);
  out["root"] = g.vertex_id(g.root());
  return out;
}

Graph graph_from_json(const Json& j) {
  std::vector<VertexId> vertices;
  const Json& vs = field(j, "vertices");
  if (!vs.is_array()) throw InputError("\"vertices\" must be an array");
  for (const auto& v : vs) vertices.push_back(as_string(v, "vertex id"));
  std::vector<Graph::EdgeSpec> edges;
  const Json& es = field(j, "edges");
  if (!es.is_array()) throw InputError("\"edges\" must be an array");
  for (const auto& e : es)
    edges.push_back({as_string(field(e, "id"), "edge id"), as_string(field(e, "src"), "edge src"),
                     as_string(field(e, "dst"), "edge dst")});
  std::string root = j.contains("root") ? as_string(j.at("root"), "root") : (vertices.empty() ? "" : vertices.front());
  return Graph(std::move(vertices), std::move(edges), root);
}

Graph parse_graph(std::string_view text) { return graph_from_json(parse_json(text, "graph")); }

Json polarization_to_json(const Graph& g, const Polarization& mu) {
  Json values = Json::object();
  for (Index v = 0; v < g.num_vertices(); ++v) values[g.vertex_id(v)] = to_string(mu.values[v]);
  return Json{{"values", std::move(values)}, {"degree", mu.degree}};
}

Polarization polarization_from_json(const Graph& g, const Json& j) {
  std::vector<Rational> vals(g.num_vertices(), 0);
  const Json& values = field(j, "values");
  if (!values.is_object()) throw InputError("\"values\" must be an object");
  for (const auto& [id, q] : values.items()) vals[g.vertex_index(id)] = as_rational(q, "polarization value");
  Polarization mu = Polarization::from_values(g, std::move(vals));
  if (j.contains("degree") && as_int(j.at("degree"), "degree") != mu.degree)
    throw InputError("polarization values sum to " + std::to_string(mu.degree) + ", not the declared degree");
  return mu;
}

Polarization parse_polarization(const Graph& g, std::string_view text) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
  if (trimmed == "zero") return Polarization::zero(g);
  return polarization_from_json(g, parse_json(trimmed, "polarization"));
}

// --- divisor text -----------------------------------------------------------

namespace {

class DivisorParser {
 public:
  DivisorParser(const Graph& g, std::string_view text) : g_(g) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  TropicalDivisor parse() {
    TropicalDivisor d(g_);
    if (s_ == "0") return d;
    if (s_.empty()) fail("empty divisor");
    bool first = true;
    while (pos_ < s_.size()) {
      std::int64_t sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (first && peek() == '+') fail("leading '+'");
        sign = get() == '-' ? -1 : 1;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      std::int64_t coeff = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        coeff = number();
        if (peek() == '*') ++pos_;
      }
      coeff *= sign;
      if (peek() == 'p' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
        pos_ += 2;
        std::string edge = ident();
        expect(',');
        std::size_t close = s_.find(')', pos_);
        if (close == std::string::npos) fail("missing ')'");
        Rational r = parse_rational(std::string_view(s_).substr(pos_, close - pos_));
        pos_ = close + 1;
        d.add_point(g_, g_.edge_index(edge), r, coeff);
      } else {
        d.add_vertex(g_.vertex_index(ident()), coeff);
      }
    }
    return d;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("divisor \"" + s_ + "\": " + why + " at offset " + std::to_string(pos_));
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::int64_t number() {
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (v > (INT64_MAX - 9) / 10) fail("coefficient too large");
      v = v * 10 + (get() - '0');
    }
    return v;
  }
  std::string ident() {
    const std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected an identifier");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return s_.substr(start, pos_ - start);
  }

  const Graph& g_;
  std::string s_;
  std::size_t pos_ = 0;
};

void append_term(std::string& out, std::int64_t w, const std::string& atom) {
  if (w == 0) return;
  if (w < 0) {
    out += '-';
  } else if (!out.empty()) {
    out += '+';
  }
  std::int64_t a = w < 0 ? -w : w;
  if (a != 1) out += std::to_string(a);
  out += atom;
}

}  // namespace

TropicalDivisor parse_divisor(const Graph& g, std::string_view text) { return DivisorParser(g, text).parse(); }

std::string format_divisor(const Graph& g, const TropicalDivisor& d) {
  std::string out;
  for (Index v = 0; v < g.num_vertices(); ++v) append_term(out, d.vertex_part()[v], g.vertex_id(v));
  for (const auto& [key, w] : d.interior())
    append_term(out, w, "p(" + g.edge(key.first).id + "," + to_string(key.second) + ")");
  return out.empty() ? "0" : out;
}

std::string format_divisor(const Graph& g, const Divisor& d) { return format_divisor(g, TropicalDivisor(g, d)); }

Json tropical_divisor_to_json(const Graph& g, const TropicalDivisor& d) {
  Json out = Json::array();
  for (Index v = 0; v < g.num_vertices(); ++v)
    if (d.vertex_part()[v] != 0) out.push_back({{"vertex", g.vertex_id(v)}, {"w", d.vertex_part()[v]}});
  for (const auto& [key, w] : d.interior())
    out.push_back({{"edge", g.edge(key.first).id}, {"pos", to_string(key.second)}, {"w", w}});
  return out;
}

TropicalDivisor tropical_divisor_from_json(const Graph& g, const Json& j) {
  if (!j.is_array()) throw InputError("tropical divisor JSON must be an array");
  TropicalDivisor d(g);
  for (const auto& item : j) {
    std::int64_t w = as_int(field(item, "w"), "weight");
    if (item.contains("vertex")) {
      d.add_vertex(g.vertex_index(as_string(item.at("vertex"), "vertex")), w);
    } else {
      d.add_point(g, g.edge_index(as_string(field(item, "edge"), "edge")), as_rational(field(item, "pos"), "pos"), w);
    }
  }
  return d;
}

Json divisor_to_json(const Graph& g, const Divisor& d) {
  Json out = Json::object();
  for (Index v = 0; v < g.num_vertices(); ++v) out[g.vertex_id(v)] = d[v];
  return out;
}

Json pseudo_divisor_to_json(const Graph& g, const PseudoDivisor& pd) {
  Json edges = Json::array();
  for (Index e : pd.edges) edges.push_back(g.edge(e).id);
  Json d = divisor_to_json(g, pd.base);
  for (Index e : pd.edges) d[exceptional_vertex_name(g, e)] = -1;
  return Json{{"E", std::move(edges)}, {"D", std::move(d)}};
}

PseudoDivisor pseudo_divisor_from_json(const Graph& g, const Json& j) {
  PseudoDivisor pd{{}, Divisor(g.num_vertices())};
  for (const auto& e : field(j, "E")) pd.edges.push_back(g.edge_index(as_string(e, "edge id")));
  std::sort(pd.edges.begin(), pd.edges.end());
  if (std::adjacent_find(pd.edges.begin(), pd.edges.end()) != pd.edges.end()) throw InputError("repeated edge in E");
  for (const auto& [id, w] : field(j, "D").items()) {
    if (auto v = g.find_vertex(id)) {
      pd.base[*v] = as_int(w, "divisor value");
      continue;
    }
    bool matched = false;
    for (Index e : pd.edges)
      if (exceptional_vertex_name(g, e) == id) {
        if (as_int(w, "divisor value") != -1) throw InputError(id + " must carry -1");
        matched = true;
      }
    if (!matched) throw InputError("unknown vertex " + id);
  }
  return pd;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace tropabel::io
