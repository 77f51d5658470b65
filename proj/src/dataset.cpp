#include "vqr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vqr/errors.hpp"

namespace vqr {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || t.empty()) {
    throw ParseError("expected a number at " + where + ", got '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

/// Normalize weights to sum exactly (to the last ulp achievable) to one.
Eigen::VectorXd normalize_weights(Eigen::VectorXd w) {
  long double total = 0.0L;
  for (int i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) throw ValidationError("weights must be finite");
    if (w[i] < 0.0) throw ValidationError("weights must be nonnegative");
    total += static_cast<long double>(w[i]);
  }
  if (!(total > 0.0L)) throw ValidationError("weights must have positive total mass");
  for (int i = 0; i < w.size(); ++i) {
    w[i] = static_cast<double>(static_cast<long double>(w[i]) / total);
  }
  return w;
}

}  // namespace

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  std::string known;
  for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
  throw SchemaError("column '" + name + "' not found (available: " + known + ")");
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("'" + path + "' is empty");

  Table table;
  for (auto& name : split(lines[0], ',')) table.names.push_back(trim(name));
  const int k = static_cast<int>(table.names.size());
  const int n = static_cast<int>(lines.size()) - 1;
  table.values.resize(n, k);
  for (int i = 0; i < n; ++i) {
    const auto cells = split(lines[i + 1], ',');
    if (static_cast<int>(cells.size()) != k) {
      throw ParseError("'" + path + "' line " + std::to_string(i + 2) + ": expected " +
                       std::to_string(k) + " cells, got " + std::to_string(cells.size()));
    }
    for (int c = 0; c < k; ++c) {
      table.values(i, c) = parse_double(
          cells[c], "'" + path + "' line " + std::to_string(i + 2) + " column " + std::to_string(c + 1));
    }
  }
  return table;
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    out << (c ? "," : "") << table.names[c];
  }
  out << '\n';
  for (int i = 0; i < table.values.rows(); ++i) {
    for (int c = 0; c < table.values.cols(); ++c) {
      out << (c ? "," : "") << format_double(table.values(i, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

FeatureMap FeatureMap::parse(const std::string& text) {
  FeatureMap map;
  if (trim(text).empty()) return map;
  for (const auto& raw : split(text, ',')) {
    const std::string term = trim(raw);
    if (term.empty()) throw ParseError("empty feature term in '" + text + "'");
    FeatureTerm ft;
    if (term.rfind("levels:", 0) == 0) {
      ft.kind = FeatureTerm::Kind::levels;
      ft.a = trim(term.substr(7));
      if (ft.a.empty()) throw ParseError("levels term needs a column name: '" + term + "'");
    } else if (auto pos = term.find("=="); pos != std::string::npos) {
      ft.kind = FeatureTerm::Kind::indicator;
      ft.a = trim(term.substr(0, pos));
      ft.level = parse_double(term.substr(pos + 2), "indicator level of '" + term + "'");
    } else if (auto cpos = term.find('^'); cpos != std::string::npos) {
      ft.kind = FeatureTerm::Kind::power;
      ft.a = trim(term.substr(0, cpos));
      const std::string deg = trim(term.substr(cpos + 1));
      ft.degree = static_cast<int>(parse_double(deg, "exponent of '" + term + "'"));
      if (ft.degree < 1) throw ParseError("exponent must be >= 1 in '" + term + "'");
    } else if (auto spos = term.find('*'); spos != std::string::npos) {
      ft.kind = FeatureTerm::Kind::interaction;
      ft.a = trim(term.substr(0, spos));
      ft.b = trim(term.substr(spos + 1));
      if (ft.a.empty() || ft.b.empty()) throw ParseError("interaction needs two columns: '" + term + "'");
    } else {
      ft.kind = FeatureTerm::Kind::identity;
      ft.a = term;
    }
    map.terms.push_back(ft);
  }
  return map;
}

Eigen::MatrixXd FeatureMap::apply(const Table& raw, std::vector<std::string>* out_names) const {
  const int n = static_cast<int>(raw.values.rows());
  std::vector<Eigen::VectorXd> cols;
  std::vector<std::string> names;
  cols.push_back(Eigen::VectorXd::Ones(n));
  names.push_back("intercept");

  for (const auto& term : terms) {
    switch (term.kind) {
      case FeatureTerm::Kind::identity: {
        cols.push_back(raw.values.col(raw.column(term.a)));
        names.push_back(term.a);
        break;
      }
      case FeatureTerm::Kind::power: {
        const Eigen::VectorXd base = raw.values.col(raw.column(term.a));
        cols.push_back(base.array().pow(term.degree).matrix());
        names.push_back(term.a + "^" + std::to_string(term.degree));
        break;
      }
      case FeatureTerm::Kind::interaction: {
        const Eigen::VectorXd a = raw.values.col(raw.column(term.a));
        const Eigen::VectorXd b = raw.values.col(raw.column(term.b));
        cols.push_back((a.array() * b.array()).matrix());
        names.push_back(term.a + "*" + term.b);
        break;
      }
      case FeatureTerm::Kind::indicator: {
        const Eigen::VectorXd a = raw.values.col(raw.column(term.a));
        cols.push_back((a.array() == term.level).cast<double>().matrix());
        names.push_back(term.a + "==" + format_double(term.level));
        break;
      }
      case FeatureTerm::Kind::levels: {
        const Eigen::VectorXd a = raw.values.col(raw.column(term.a));
        std::set<double> uniq(a.data(), a.data() + n);
        if (uniq.empty()) throw ValidationError("levels term on empty column");
        bool first = true;
        for (double v : uniq) {
          if (first) {  // smallest level is the reference absorbed by the intercept
            first = false;
            continue;
          }
          cols.push_back((a.array() == v).cast<double>().matrix());
          names.push_back(term.a + "==" + format_double(v));
        }
        break;
      }
    }
  }

  Eigen::MatrixXd X(n, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) X.col(static_cast<int>(c)) = cols[c];
  if (out_names) *out_names = names;
  return X;
}

void Dataset::validate() const {
  if (n() < 1 || d() < 1 || p() < 1) {
    throw ValidationError("Dataset: need n >= 1, d >= 1, p >= 1");
  }
  if (X.rows() != n()) throw ValidationError("Dataset: X and Y row counts differ");
  if (nu.size() != n()) throw ValidationError("Dataset: weight vector length differs from n");
  if (!Y.allFinite() || !X.allFinite() || !nu.allFinite()) {
    throw ValidationError("Dataset: non-finite entries");
  }
  for (int i = 0; i < n(); ++i) {
    if (X(i, 0) != 1.0) throw ValidationError("Dataset: first column of X must be identically 1");
    if (nu[i] < 0.0) throw ValidationError("Dataset: weights must be nonnegative");
  }
  if (std::abs(nu.sum() - 1.0) > 1e-10) throw ValidationError("Dataset: weights must sum to one");
}

Eigen::VectorXd Dataset::x_bar() const { return X.transpose() * nu; }

Dataset make_dataset(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X, const Eigen::VectorXd& nu) {
  Dataset data;
  data.Y = Y;
  data.X = X;
  data.nu = nu.size() == 0 ? Eigen::VectorXd::Constant(Y.rows(), 1.0) : nu;
  data.nu = normalize_weights(data.nu);
  data.validate();
  return data;
}

Dataset load_dataset(const std::string& path, const std::vector<std::string>& y_columns,
                     const FeatureMap& feature_map, const std::string& weight_mode) {
  const Table raw = read_csv(path);
  const int n = static_cast<int>(raw.values.rows());
  if (n < 1) throw ValidationError("'" + path + "' has no data rows");
  if (y_columns.empty()) throw ValidationError("at least one outcome column is required");

  Dataset data;
  data.Y.resize(n, static_cast<int>(y_columns.size()));
  for (std::size_t c = 0; c < y_columns.size(); ++c) {
    data.Y.col(static_cast<int>(c)) = raw.values.col(raw.column(y_columns[c]));
    data.y_names.push_back(y_columns[c]);
  }
  data.X = feature_map.apply(raw, &data.x_names);
  if (weight_mode == "uniform") {
    data.nu = Eigen::VectorXd::Constant(n, 1.0);
  } else {
    data.nu = raw.values.col(raw.column(weight_mode));
  }
  data.nu = normalize_weights(data.nu);
  data.raw_Z = raw.values;
  data.validate();
  return data;
}

namespace {

nlohmann::json matrix_to_rows(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_to_matrix(const nlohmann::json& rows, const std::string& key) {
  if (!rows.is_array() || rows.empty()) throw SchemaError("'" + key + "' must be a non-empty array");
  const int n = static_cast<int>(rows.size());
  if (!rows[0].is_array()) throw SchemaError("'" + key + "' must be an array of rows");
  const int k = static_cast<int>(rows[0].size());
  Eigen::MatrixXd M(n, k);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != k) {
      throw SchemaError("'" + key + "' row " + std::to_string(i) + " has inconsistent length");
    }
    for (int c = 0; c < k; ++c) {
      if (!rows[i][c].is_number()) throw SchemaError("'" + key + "' has a non-numeric entry");
      M(i, c) = rows[i][c].get<double>();
    }
  }
  return M;
}

}  // namespace

std::string dataset_to_json(const Dataset& data) {
  nlohmann::json j;
  j["n"] = data.n();
  j["d"] = data.d();
  j["p"] = data.p();
  j["Y"] = matrix_to_rows(data.Y);
  j["X"] = matrix_to_rows(data.X);
  j["nu"] = std::vector<double>(data.nu.data(), data.nu.data() + data.nu.size());
  if (!data.y_names.empty()) j["y_names"] = data.y_names;
  if (!data.x_names.empty()) j["x_names"] = data.x_names;
  return j.dump();
}

Dataset dataset_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("dataset JSON: ") + e.what());
  }
  for (const char* key : {"n", "d", "p", "Y", "X", "nu"}) {
    if (!j.contains(key)) throw SchemaError(std::string("dataset JSON missing key '") + key + "'");
  }
  Dataset data;
  data.Y = rows_to_matrix(j["Y"], "Y");
  data.X = rows_to_matrix(j["X"], "X");
  const auto nu = j["nu"].get<std::vector<double>>();
  data.nu = Eigen::Map<const Eigen::VectorXd>(nu.data(), static_cast<int>(nu.size()));
  if (j["n"].get<int>() != data.n() || j["d"].get<int>() != data.d() || j["p"].get<int>() != data.p()) {
    throw SchemaError("dataset JSON dimension fields disagree with array shapes");
  }
  if (j.contains("y_names")) data.y_names = j["y_names"].get<std::vector<std::string>>();
  if (j.contains("x_names")) data.x_names = j["x_names"].get<std::vector<std::string>>();
  data.validate();
  return data;
}

void save_dataset_json(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << dataset_to_json(data) << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

Dataset load_dataset_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return dataset_from_json(buffer.str());
}

}  // namespace vqr
