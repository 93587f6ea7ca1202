#include "sbridge/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbridge {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Vector vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw IoError(std::string("json: '") + field + "' must be an array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw IoError(std::string("json: '") + field + "' must be a non-empty array");
  }
  const size_t cols = j[0].size();
  Matrix m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) {
      throw IoError(std::string("json: ragged row in '") + field + "'");
    }
    for (size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("json: parse failure: ") + e.what());
  }
}

}  // namespace

std::string to_json(const PotentialPair& pair) {
  json j;
  j["eps"] = pair.eps;
  j["f"] = vector_to_json(pair.f);
  j["g"] = vector_to_json(pair.g);
  j["iterations"] = pair.iterations;
  j["marginal_error"] = pair.marginal_error;
  j["converged"] = pair.converged;
  return j.dump(2) + "\n";
}

PotentialPair potential_pair_from_json(const std::string& text) {
  const json j = parse(text);
  PotentialPair pair;
  try {
    pair.eps = j.at("eps").get<double>();
    pair.f = vector_from_json(j.at("f"), "f");
    pair.g = vector_from_json(j.at("g"), "g");
    pair.iterations = j.at("iterations").get<int>();
    pair.marginal_error = j.at("marginal_error").get<double>();
    pair.converged = j.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw IoError(std::string("json: bad potential pair: ") + e.what());
  }
  return pair;
}

std::string to_json(const BridgeModel& model) {
  json j;
  j["eps"] = model.eps;
  j["atoms"] = matrix_to_json(model.atoms);
  j["potential"] = vector_to_json(model.potential);
  return j.dump(2) + "\n";
}

BridgeModel bridge_model_from_json(const std::string& text) {
  const json j = parse(text);
  BridgeModel model;
  try {
    model.eps = j.at("eps").get<double>();
    model.atoms = matrix_from_json(j.at("atoms"), "atoms");
    model.potential = vector_from_json(j.at("potential"), "potential");
  } catch (const json::exception& e) {
    throw IoError(std::string("json: bad bridge model: ") + e.what());
  }
  model.validate();
  return model;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return ss.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace sbridge
