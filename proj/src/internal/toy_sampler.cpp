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

#include "internal/toy_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace tprivacy::internal {
namespace {

void append_cdf(std::vector<double>& out, const std::vector<double>& log_mass) {
  double acc = 0;
  for (double lm : log_mass) {
    acc += std::exp(lm);
    out.push_back(acc);
  }
}

}  // namespace

ToySampler::ToySampler(const DiscreteToy& toy)
    : n_(toy.n),
      x_min_(toy.x_min),
      y_min_(toy.y_min),
      nx_(toy.x_count()),
      ny_(toy.y_count()),
      rate_(toy.mechanism.budget.epsilon() / toy.mechanism.sensitivity) {
  double acc = 0;
  for (double p : toy.prior) {
    acc += p;
    beta_cdf_.push_back(acc);
  }
  std::vector<double> lx;
  for (std::int64_t x = toy.x_min; x <= toy.x_max; ++x) lx.push_back(toy.log_px(x));
  append_cdf(x_cdf_, lx);
  for (const auto& beta : toy.beta_grid) {
    for (std::int64_t x = toy.x_min; x <= toy.x_max; ++x) {
      std::vector<double> ly;
      for (std::int64_t y = toy.y_min; y <= toy.y_max; ++y) ly.push_back(toy.log_py(y, x, beta));
      append_cdf(y_cdf_, ly);
    }
  }
}

std::size_t ToySampler::pick(const std::vector<double>& cdf, std::size_t offset,
                             std::size_t count, double u) {
  const auto first = cdf.begin() + static_cast<std::ptrdiff_t>(offset);
  const auto last = first + static_cast<std::ptrdiff_t>(count);
  // Scale by the block total so rounding in the running sum cannot leave a gap.
  const auto it = std::upper_bound(first, last, u * *(last - 1));
  return it == last ? count - 1 : static_cast<std::size_t>(it - first);
}

std::size_t ToySampler::draw_beta(Stream& rng) const {
  return pick(beta_cdf_, 0, beta_cdf_.size(), rng.uniform());
}

void ToySampler::draw_data(std::size_t beta_index, Stream& rng, std::int64_t* x,
                           std::int64_t* y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t xi = pick(x_cdf_, 0, nx_, rng.uniform());
    const std::size_t yi = pick(y_cdf_, (beta_index * nx_ + xi) * ny_, ny_, rng.uniform());
    x[i] = x_min_ + static_cast<std::int64_t>(xi);
    y[i] = y_min_ + static_cast<std::int64_t>(yi);
  }
}

double ToySampler::log_accept(const ToyData& s_tilde, const std::int64_t* x,
                              const std::int64_t* y) const {
  std::int64_t distance = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    distance += std::llabs(s_tilde.x[i] - x[i]) + std::llabs(s_tilde.y[i] - y[i]);
  }
  return -rate_ * static_cast<double>(distance);
}

}  // namespace tprivacy::internal
