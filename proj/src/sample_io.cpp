#include "sbridge/sample_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace sbridge {

namespace {

double parse_double(const std::string& token, size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || begin == end) {
    throw IoError("csv: cannot parse value '" + token + "' at line " +
                  std::to_string(line_no));
  }
  if (!std::isfinite(value)) {
    throw IoError("csv: non-finite value at line " + std::to_string(line_no));
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

SampleSet read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty file: " + path);
  const size_t d = split_csv_line(line).size();
  if (d == 0) throw IoError("csv: empty header: " + path);

  std::vector<double> values;
  size_t rows = 0;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != d) {
      throw IoError("csv: row " + std::to_string(rows) + " (line " +
                    std::to_string(line_no) + ") has " +
                    std::to_string(fields.size()) + " values, expected " +
                    std::to_string(d));
    }
    for (const auto& field : fields) values.push_back(parse_double(field, line_no));
    ++rows;
  }
  if (rows == 0) throw IoError("csv: no data rows in " + path);

  Matrix points(rows, d);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < d; ++j) points(i, j) = values[i * d + j];
  SampleSet set(std::move(points));
  set.validate();
  return set;
}

void write_csv(const SampleSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  for (Index j = 0; j < set.dim(); ++j) {
    if (j > 0) out << ',';
    out << 'x' << j;
  }
  out << '\n';
  for (Index i = 0; i < set.size(); ++i) {
    for (Index j = 0; j < set.dim(); ++j) {
      if (j > 0) out << ',';
      out << to_round_trip_string(set.points(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure: " + path);
}

SampleSet read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("json: parse failure in " + path + ": " + e.what());
  }
  if (!j.contains("points") || !j["points"].is_array() || j["points"].empty()) {
    throw IoError("json: missing or empty 'points' array in " + path);
  }
  const auto& rows = j["points"];
  const size_t n = rows.size();
  const size_t d = rows[0].size();
  Matrix points(n, d);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != d) {
      throw IoError("json: row " + std::to_string(i) + " has " +
                    std::to_string(rows[i].size()) + " values, expected " +
                    std::to_string(d));
    }
    for (size_t k = 0; k < d; ++k) {
      if (!rows[i][k].is_number()) {
        throw IoError("json: non-numeric entry at row " + std::to_string(i));
      }
      points(i, k) = rows[i][k].get<double>();
    }
  }
  SampleSet set;
  set.points = std::move(points);
  if (j.contains("weights") && !j["weights"].is_null()) {
    const auto& w = j["weights"];
    if (w.size() != n) throw IoError("json: weights length mismatch in " + path);
    set.weights.resize(n);
    for (size_t i = 0; i < n; ++i) set.weights[i] = w[i].get<double>();
  } else {
    set.weights = SampleSet::uniform_weights(static_cast<Index>(n));
  }
  if (j.contains("label") && j["label"].is_string()) {
    set.label = j["label"].get<std::string>();
  }
  try {
    set.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError("json: invalid sample set in " + path + ": " + e.what());
  }
  return set;
}

void write_json(const SampleSet& set, const std::string& path) {
  nlohmann::json j;
  auto& rows = j["points"] = nlohmann::json::array();
  for (Index i = 0; i < set.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < set.dim(); ++k) row.push_back(set.points(i, k));
    rows.push_back(std::move(row));
  }
  auto& w = j["weights"] = nlohmann::json::array();
  for (Index i = 0; i < set.size(); ++i) w.push_back(set.weights[i]);
  j["label"] = set.label;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace

FileFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") {
    return FileFormat::kJson;
  }
  return FileFormat::kCsv;
}

SampleSet read_samples(const std::string& path, FileFormat format) {
  return format == FileFormat::kCsv ? read_csv(path) : read_json(path);
}

void write_samples(const SampleSet& set, const std::string& path, FileFormat format) {
  set.validate();
  if (format == FileFormat::kCsv) {
    write_csv(set, path);
  } else {
    write_json(set, path);
  }
}

}  // namespace sbridge
