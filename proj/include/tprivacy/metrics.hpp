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

#include <cstddef>
#include <utility>
#include <vector>

#include "tprivacy/mechanisms.hpp"
#include "tprivacy/random.hpp"

namespace tprivacy {

struct CountyTable {
  std::vector<double> w;  // white population per tract
  std::vector<double> b;  // African American population per tract
  double w_cty = 0;
  double b_cty = 0;

  // Totals set to the tract sums.
  static CountyTable from_tracts(std::vector<double> w, std::vector<double> b);
};

// d = 1/2 sum_i |w_i / w_cty - b_i / b_cty|
double dissimilarity(const CountyTable& table);

struct DissimilarityStudy {
  double confidential = 0;
  std::size_t replicates = 0;
  std::size_t defined = 0;
  double mean = 0;
  double sd = 0;
  std::vector<std::pair<double, double>> quantiles;  // (probability, value)
  double undefined_fraction = 0;     // a privatized total was <= 0
  double out_of_range_fraction = 0;  // defined but outside [0, 1]
};

// Re-releases every cell and both totals with independent double geometric
// noise at budget eps, `replicates` times, and summarizes the recomputed
// index. Nothing is clamped; pathological outcomes are counted.
DissimilarityStudy privatized_dissimilarity_study(const CountyTable& table,
                                                  PrivacyBudget eps,
                                                  std::size_t replicates,
                                                  const Stream& rng);

}  // namespace tprivacy
