// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexpow/relaxations.hpp"

namespace simplexpow {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaLine = "# schema=1";

/// Twelve significant digits; non-finite values print as nan / inf / -inf.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// JSON number rounded to twelve significant digits, or null when not finite.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_double(v));
}

inline Json json_vector(const VectorXd& v) {
  Json a = Json::array();
  for (double e : v) a.push_back(json_number(e));
  return a;
}

inline Json json_matrix(const MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(json_vector(m.row(i).transpose()));
  return a;
}

inline VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array of numbers");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(std::string(what) + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline MatrixXd matrix_from_json(const Json& j, std::size_t cols, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array of rows");
  MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const VectorXd r = vector_from_json(j[i], what);
    if (static_cast<std::size_t>(r.size()) != cols) throw Error(std::string(what) + " rows must have n entries");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

inline GroundSet ground_from_json(const Json& g, std::size_t n) {
  if (!g.is_object() || !g.contains("type")) throw Error("ground must be an object with a type");
  const std::string type = g.at("type").get<std::string>();
  if (type == "simplex") return GroundSet::simplex();
  if (type != "polytope") throw Error("unknown ground type: " + type);
  auto rows = [&](const char* key) {
    return g.contains(key) ? matrix_from_json(g.at(key), n, key) : MatrixXd(0, static_cast<Eigen::Index>(n));
  };
  auto rhs = [&](const char* key) { return g.contains(key) ? vector_from_json(g.at(key), key) : VectorXd(0); };
  return GroundSet::polytope(rows("A"), rhs("b"), rows("C"), rhs("d"));
}

inline Json ground_to_json(const GroundSet& g) {
  if (g.type == GroundType::Simplex) return Json{{"type", "simplex"}};
  return Json{{"type", "polytope"}, {"A", json_matrix(g.A)}, {"b", json_vector(g.b)},
              {"C", json_matrix(g.C)}, {"d", json_vector(g.d)}};
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw Error("instance must be a JSON object");
  for (const char* key : {"n", "kappa", "alpha", "beta"})
    if (!j.contains(key)) throw Error(std::string("instance is missing \"") + key + "\"");
  Instance inst;
  inst.n = j.at("n").get<std::size_t>();
  inst.kappa = j.at("kappa").get<double>();
  inst.alpha = vector_from_json(j.at("alpha"), "alpha");
  inst.beta = vector_from_json(j.at("beta"), "beta");
  inst.ground = j.contains("ground") ? ground_from_json(j.at("ground"), inst.n) : GroundSet::simplex();
  inst.validate();
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  return Json{{"n", inst.n},
              {"kappa", json_number(inst.kappa)},
              {"alpha", json_vector(inst.alpha)},
              {"beta", json_vector(inst.beta)},
              {"ground", ground_to_json(inst.ground)}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace simplexpow
