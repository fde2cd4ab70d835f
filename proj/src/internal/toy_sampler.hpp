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
#include <cstdint>
#include <vector>

#include "tprivacy/bayes_abc.hpp"
#include "tprivacy/random.hpp"

namespace tprivacy::internal {

// Inverse-CDF sampling tables for a DiscreteToy, plus the rejection test.
class ToySampler {
 public:
  explicit ToySampler(const DiscreteToy& toy);

  std::size_t draw_beta(Stream& rng) const;
  // Fills x and y (size n) with a confidential dataset drawn at grid point b.
  void draw_data(std::size_t beta_index, Stream& rng, std::int64_t* x,
                 std::int64_t* y) const;
  // log p(s~ | s) - log p(s~ | s~): zero at s = s~, negative otherwise.
  double log_accept(const ToyData& s_tilde, const std::int64_t* x,
                    const std::int64_t* y) const;

  std::size_t n() const { return n_; }

 private:
  static std::size_t pick(const std::vector<double>& cdf, std::size_t offset,
                          std::size_t count, double u);

  std::size_t n_;
  std::int64_t x_min_, y_min_;
  std::size_t nx_, ny_;
  double rate_;
  std::vector<double> beta_cdf_;
  std::vector<double> x_cdf_;
  std::vector<double> y_cdf_;  // [beta][x][y]
};

}  // namespace tprivacy::internal
