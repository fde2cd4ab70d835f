//
// Copyright 2026 The tprivacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "tprivacy/error.hpp"

namespace tprivacy::cli {

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Json number_json(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json meta_json(const Meta& meta) {
  Json params = Json::object();
  for (const auto& [name, values] : meta.params) {
    if (values.size() == 1) {
      params[name] = values.front();
    } else {
      params[name] = values;
    }
  }
  Json out;
  out["tool"] = "tprivacy";
  out["version"] = kVersion;
  out["command"] = meta.command;
  out["seed"] = meta.seed ? Json(*meta.seed) : Json(nullptr);
  out["params"] = std::move(params);
  return out;
}

Csv::Csv(const Meta& meta) {
  out_ << "# tprivacy " << kVersion << " command=" << meta.command
       << " seed=" << (meta.seed ? std::to_string(*meta.seed) : "none");
  for (const auto& [name, values] : meta.params) {
    out_ << ' ' << name << '=';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ';';
      out_ << values[i];
    }
  }
  out_ << '\n';
}

void Csv::header(const std::vector<std::string>& columns) { row(columns); }

void Csv::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void Csv::comment(const std::string& text) { out_ << "# " << text << '\n'; }

Json to_json(const MechanismSpec& spec) {
  Json out;
  out["family"] = family_name(spec.family);
  out["sensitivity"] = spec.sensitivity;
  out["epsilon"] = spec.budget.epsilon();
  if (spec.additive()) out["scale"] = spec.scale();
  return out;
}

Json to_json(const Eigen::Matrix2d& m) {
  return Json::array({Json::array({number_json(m(0, 0)), number_json(m(0, 1))}),
                      Json::array({number_json(m(1, 0)), number_json(m(1, 1))})});
}

Json to_json(const FitResult& fit) {
  Json out;
  out["method"] = method_name(fit.method);
  out["n"] = fit.n;
  out["beta0"] = number_json(fit.beta0);
  out["beta1"] = number_json(fit.beta1);
  out["covariance"] = to_json(fit.covariance);
  out["residual_variance"] = number_json(fit.residual_variance);
  return out;
}

Json to_json(const Ellipse& ellipse) {
  Json out;
  out["center"] = {ellipse.center(0), ellipse.center(1)};
  out["shape"] = to_json(ellipse.shape);
  out["level"] = ellipse.level;
  return out;
}

namespace {

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  return in;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

double cell_number(const std::string& s, const std::string& path) {
  const auto v = parse_number(s);
  if (!v) fail(ErrorCode::invalid_argument, "'" + path + "': bad number '" + s + "'");
  return *v;
}

struct Table {
  std::map<std::string, std::size_t> columns;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::string& path) {
  auto in = open(path);
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) t.columns[cells[i]] = i;
      have_header = true;
      continue;
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<double> column(const Table& t, const std::string& name,
                           const std::string& path) {
  const auto it = t.columns.find(name);
  if (it == t.columns.end()) {
    fail(ErrorCode::invalid_argument, "'" + path + "' has no column '" + name + "'");
  }
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (it->second >= row.size()) {
      fail(ErrorCode::invalid_argument, "'" + path + "': short row");
    }
    out.push_back(cell_number(row[it->second], path));
  }
  return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<double> read_values(const std::string& path) {
  auto in = open(path);
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto v = parse_number(line);
    if (!v && first) {
      first = false;
      continue;
    }
    first = false;
    out.push_back(cell_number(line, path));
  }
  return out;
}

ReleaseColumns read_release(const std::string& path) {
  ReleaseColumns out;
  if (ends_with(path, ".json")) {
    auto in = open(path);
    Json doc;
    try {
      doc = Json::parse(in);
      for (const auto& rec : doc.at("records")) {
        out.x_tilde.push_back(rec.at("x_tilde").get<double>());
        out.y_tilde.push_back(rec.at("y_tilde").get<double>());
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::invalid_argument, "'" + path + "': " + e.what());
    }
    return out;
  }
  const Table t = read_table(path);
  out.x_tilde = column(t, "x_tilde", path);
  out.y_tilde = column(t, "y_tilde", path);
  return out;
}

CountyTable read_county(const std::string& path) {
  const Table t = read_table(path);
  return CountyTable::from_tracts(column(t, "w", path), column(t, "b", path));
}

}  // namespace tprivacy::cli
