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

#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tprivacy/mcem.hpp"
#include "tprivacy/mechanisms.hpp"
#include "tprivacy/metrics.hpp"
#include "tprivacy/naive_fit.hpp"

namespace tprivacy::cli {

inline constexpr std::string_view kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips; "nan", "inf" and "-inf" otherwise.
std::string number(double value);

struct Meta {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::vector<std::string>>> params;
};

Json meta_json(const Meta& meta);

class Csv {
 public:
  explicit Csv(const Meta& meta);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void comment(const std::string& text);
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

Json to_json(const MechanismSpec& spec);
Json to_json(const FitResult& fit);
Json to_json(const Ellipse& ellipse);
Json to_json(const Eigen::Matrix2d& m);
Json number_json(double value);

// One number per line; '#' comments, blank lines and a header are skipped.
std::vector<double> read_values(const std::string& path);

struct ReleaseColumns {
  std::vector<double> x_tilde;
  std::vector<double> y_tilde;
};

// CSV with x_tilde and y_tilde columns, or the JSON document `simulate` emits.
ReleaseColumns read_release(const std::string& path);

// CSV with columns tract, w, b.
CountyTable read_county(const std::string& path);

}  // namespace tprivacy::cli
