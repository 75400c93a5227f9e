#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipfree/error.hpp"
#include "lipfree/free_space.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/renorm.hpp"

namespace lipfree {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

/// Rationals are read from "p/q" strings, decimal strings or JSON integers.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline Json space_to_json(const MetricSpace& space) {
  Json pts = Json::array();
  for (const auto& p : space.points()) {
    Json jp = {{"id", p.id}};
    if (!p.label.empty()) jp["label"] = p.label;
    if (!p.coords.empty()) {
      Json c = Json::array();
      for (const auto& x : p.coords) c.push_back(rational_to_json(x));
      jp["coords"] = c;
    }
    pts.push_back(jp);
  }
  Json dist = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(rational_to_json(space.d(i, j)));
    dist.push_back(row);
  }
  return {{"points", pts}, {"base", space.id(space.base())}, {"dist", dist}};
}

/// Reads the points/base/dist layout without checking the metric axioms.
inline std::tuple<std::vector<Point>, std::string, DistanceMatrix> space_parts_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("base") || !j.contains("dist"))
    throw StructuralError("space JSON needs 'points', 'base' and 'dist'");
  std::vector<Point> pts;
  for (const auto& jp : j.at("points")) {
    Point p;
    p.id = jp.at("id").get<std::string>();
    if (jp.contains("label")) p.label = jp.at("label").get<std::string>();
    if (jp.contains("coords"))
      for (const auto& c : jp.at("coords")) p.coords.push_back(rational_from_json(c));
    pts.push_back(std::move(p));
  }
  const auto& rows = j.at("dist");
  if (!rows.is_array() || rows.size() != pts.size())
    throw StructuralError("'dist' must have one row per point");
  DistanceMatrix dist(pts.size(), Rational(0));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != pts.size())
      throw StructuralError("row " + std::to_string(i) + " of 'dist' has the wrong length");
    for (std::size_t k = 0; k < pts.size(); ++k) dist(i, k) = rational_from_json(rows[i][k]);
  }
  return {std::move(pts), j.at("base").get<std::string>(), std::move(dist)};
}

inline MetricSpace space_from_json(const Json& j) {
  auto [pts, base, dist] = space_parts_from_json(j);
  return MetricSpace::create(std::move(pts), base, std::move(dist));
}

inline Json free_vector_to_json(const MetricSpace& space, const FreeVector& mu) {
  Json terms = Json::array();
  for (const auto& [p, a] : mu.terms()) terms.push_back({{"point", space.id(p)}, {"coeff", rational_to_json(a)}});
  return {{"terms", terms}};
}

inline FreeVector free_vector_from_json(const MetricSpace& space, const Json& j) {
  std::vector<std::pair<PointIndex, Rational>> terms;
  for (const auto& t : j.at("terms"))
    terms.emplace_back(space.index_of(t.at("point").get<std::string>()), rational_from_json(t.at("coeff")));
  return FreeVector(space, terms);
}

template <typename PointFunction>
Json function_to_json(const MetricSpace& space, const PointFunction& f) {
  Json values = Json::object();
  for (PointIndex i = 0; i < space.size(); ++i) values[space.id(i)] = rational_to_json(f(i));
  return {{"values", values}};
}

inline std::vector<Rational> function_values_from_json(const MetricSpace& space, const Json& j) {
  const auto& values = j.at("values");
  std::vector<Rational> v(space.size(), Rational(0));
  std::vector<bool> seen(space.size(), false);
  for (auto it = values.begin(); it != values.end(); ++it) {
    auto i = space.index_of(it.key());
    v[i] = rational_from_json(it.value());
    seen[i] = true;
  }
  for (PointIndex i = 0; i < space.size(); ++i)
    if (!seen[i]) throw StructuralError("function has no value at '" + space.id(i) + "'");
  return v;
}

inline LipschitzFunction lipschitz_from_json(const MetricSpace& space, const Json& j) {
  return LipschitzFunction(space, function_values_from_json(space, j));
}

inline Json combination_to_json(const MetricSpace& space, const MoleculeCombination& c) {
  Json atoms = Json::array();
  for (const auto& a : c.atoms)
    atoms.push_back({{"coeff", rational_to_json(a.coeff)}, {"x", space.id(a.x)}, {"y", space.id(a.y)}});
  return atoms;
}

inline Json flow_to_json(const MetricSpace& space, const FlowSolution& flow) {
  Json arcs = Json::array();
  for (const auto& a : flow.arcs)
    arcs.push_back({{"from", space.id(a.from)}, {"to", space.id(a.to)}, {"flow", rational_to_json(a.flow)}});
  return {{"arcs", arcs}, {"objective", rational_to_json(flow.objective)}};
}

/// Shortest round-tripping decimal for a double.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Json renorm_vector_to_json(const RenormVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(format_double(v(i)));
  return a;
}

/// Decimal or exponent notation via strtod; "p/q" goes through the exact parser.
inline double parse_real(const std::string& text) {
  if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(x))
    throw ParseError("malformed real '" + text + "'");
  return x;
}

/// Arrays of decimal strings (or plain JSON numbers).
inline RenormVector renorm_vector_from_json(const Json& j) {
  if (!j.is_array()) throw StructuralError("renorm vector must be a JSON array");
  RenormVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number())
      v(static_cast<Eigen::Index>(i)) = e.get<double>();
    else if (e.is_string())
      v(static_cast<Eigen::Index>(i)) = parse_real(e.get<std::string>());
    else
      throw ParseError("renorm vector entries must be decimal strings");
  }
  return v;
}

inline Json norm_result_to_json(const NormResult& r) {
  return {{"value", r.value},
          {"lower", r.lower},
          {"gap", r.gap},
          {"primal", renorm_vector_to_json(r.primal)},
          {"dual", renorm_vector_to_json(r.dual)}};
}

}  // namespace lipfree
