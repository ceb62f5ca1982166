#pragma once

// JSON forms of curves and solved maps.
//
//   curve: {"breakpoints": [[u, a], ...], "left_slope": s, "right_slope": s}
//   map:   {"prevertices": [...], "exponents": [...], "C": [re, im], "A": [re, im]}

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardylip/conformal.hpp"
#include "hardylip/curve.hpp"

namespace hardylip {

using json = nlohmann::json;

/// Raised for malformed configuration and data files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline LipschitzGraph preset_graph(const std::string& name) {
  if (name == "flat") return LipschitzGraph::flat();
  if (name == "vee") return LipschitzGraph::vee();
  if (name == "threekink") return LipschitzGraph::threekink();
  throw ConfigError("unknown preset: " + name);
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"flat", "vee", "threekink"};
  return names;
}

inline json curve_to_json(const LipschitzGraph& g) {
  json bps = json::array();
  for (const auto& [u, a] : g.breakpoints()) bps.push_back({u, a});
  return {{"breakpoints", bps}, {"left_slope", g.left_slope()}, {"right_slope", g.right_slope()}};
}

inline LipschitzGraph curve_from_json(const json& j) {
  try {
    if (j.is_string()) return preset_graph(j.get<std::string>());
    std::vector<LipschitzGraph::Breakpoint> bps;
    for (const auto& b : j.at("breakpoints")) {
      if (!b.is_array() || b.size() != 2) throw ConfigError("breakpoint must be [u, a]");
      bps.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
    return LipschitzGraph(std::move(bps), j.at("left_slope").get<double>(), j.at("right_slope").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("curve: ") + e.what());
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("curve: ") + e.what());
  }
}

inline json map_to_json(const SchwarzChristoffelMap& m) {
  return {{"prevertices", m.prevertices()},
          {"exponents", m.exponents()},
          {"C", {m.multiplier().real(), m.multiplier().imag()}},
          {"A", {m.offset().real(), m.offset().imag()}}};
}

inline SchwarzChristoffelMap map_from_json(const LipschitzGraph& g, const json& j) {
  try {
    auto c = j.at("C").get<std::vector<double>>();
    auto a = j.at("A").get<std::vector<double>>();
    if (c.size() != 2 || a.size() != 2) throw ConfigError("C and A must be [re, im]");
    return SchwarzChristoffelMap::from_parameters(g, j.at("prevertices").get<std::vector<double>>(),
                                                  j.at("exponents").get<std::vector<double>>(), {c[0], c[1]},
                                                  {a[0], a[1]});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace hardylip
