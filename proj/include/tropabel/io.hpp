#pragma once

// JSON and text formats shared by the CLI, the tests and the exporters.
//
// Divisor text grammar (whitespace ignored):
//   divisor := "0" | term (("+" | "-") term)*      first term may start with "-"
//   term    := [integer ["*"]] atom
//   atom    := vertex-id | "p(" edge-id "," rational ")"
//   id      := [A-Za-z_][A-Za-z0-9_]*
// format_divisor emits the canonical form: vertices in id order, then points
// by (edge id, position), unit coefficients written without the digit.

#include "json.hpp"
#include <string>
#include <string_view>

#include "tropabel/graph.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/tropical.hpp"

namespace tropabel::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "tropabel 1.0.0";

std::string read_file(const std::string& path);  // throws InputError

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);  // throws InputError
Graph parse_graph(std::string_view text);

Json polarization_to_json(const Graph& g, const Polarization& mu);
Polarization polarization_from_json(const Graph& g, const Json& j);
// "zero" or a JSON document.
Polarization parse_polarization(const Graph& g, std::string_view text);

TropicalDivisor parse_divisor(const Graph& g, std::string_view text);
std::string format_divisor(const Graph& g, const TropicalDivisor& d);
std::string format_divisor(const Graph& g, const Divisor& d);

Json tropical_divisor_to_json(const Graph& g, const TropicalDivisor& d);
TropicalDivisor tropical_divisor_from_json(const Graph& g, const Json& j);

// {"E":[...],"D":{"u":1,...,"e1@mid":-1}}
Json pseudo_divisor_to_json(const Graph& g, const PseudoDivisor& pd);
PseudoDivisor pseudo_divisor_from_json(const Graph& g, const Json& j);

Json divisor_to_json(const Graph& g, const Divisor& d);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace tropabel::io
