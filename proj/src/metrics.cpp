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

#include "tprivacy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"

namespace tprivacy {

CountyTable CountyTable::from_tracts(std::vector<double> w, std::vector<double> b) {
  require(w.size() == b.size(), "tract columns must have equal lengths");
  CountyTable t;
  t.w_cty = std::accumulate(w.begin(), w.end(), 0.0);
  t.b_cty = std::accumulate(b.begin(), b.end(), 0.0);
  t.w = std::move(w);
  t.b = std::move(b);
  return t;
}

double dissimilarity(const CountyTable& table) {
  require(table.w.size() == table.b.size(), "tract columns must have equal lengths");
  if (!(table.w_cty > 0) || !(table.b_cty > 0)) {
    fail(ErrorCode::undefined_index, "county totals must be positive");
  }
  double sum = 0;
  for (std::size_t i = 0; i < table.w.size(); ++i) {
    sum += std::abs(table.w[i] / table.w_cty - table.b[i] / table.b_cty);
  }
  return 0.5 * sum;
}

namespace {

// Linear interpolation between order statistics (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DissimilarityStudy privatized_dissimilarity_study(const CountyTable& table,
                                                  PrivacyBudget eps,
                                                  std::size_t replicates,
                                                  const Stream& rng) {
  require(replicates >= 2, "need at least two replicates");
  require(!table.w.empty(), "county has no tracts");
  DissimilarityStudy out;
  out.confidential = dissimilarity(table);
  out.replicates = replicates;

  const std::vector<double> values =
      kernels::dissimilarity_replicates(table, eps, replicates, rng);
  std::vector<double> defined;
  std::size_t out_of_range = 0;
  for (double d : values) {
    if (std::isnan(d)) continue;
    defined.push_back(d);
    if (d < 0 || d > 1) ++out_of_range;
  }
  const double total = static_cast<double>(replicates);
  out.defined = defined.size();
  out.undefined_fraction = static_cast<double>(replicates - defined.size()) / total;
  out.out_of_range_fraction = static_cast<double>(out_of_range) / total;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.mean = nan;
  out.sd = nan;
  if (!defined.empty()) {
    double sum = 0;
    for (double d : defined) sum += d;
    out.mean = sum / static_cast<double>(defined.size());
  }
  if (defined.size() >= 2) {
    double ss = 0;
    for (double d : defined) ss += (d - out.mean) * (d - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(defined.size() - 1));
  }
  std::sort(defined.begin(), defined.end());
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    out.quantiles.emplace_back(p, defined.empty() ? nan : quantile_sorted(defined, p));
  }
  return out;
}

}  // namespace tprivacy
