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

#include <cmath>
#include <limits>
#include <random>

#include "internal/toy_sampler.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"
#include "tprivacy/mechanisms.hpp"
#include "tprivacy/naive_fit.hpp"

namespace tprivacy::reference {

ProposalSet draw_proposals(const ProposalRequest& req, const Stream& rng) {
  const std::size_t n = req.x_tilde.size();
  ProposalSet out;
  out.k = req.k;
  out.n = n;
  out.sigma = req.sigma;
  for (std::size_t kk = 0; kk < req.k; ++kk) {
    Stream s = rng.child(static_cast<std::uint64_t>(kk));
    std::poisson_distribution<std::int64_t> pois(req.lambda);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(pois(s));
      const double y = req.beta0 + req.beta1 * x + req.sigma * normal(s);
      out.x.push_back(x);
      out.y.push_back(y);
      out.record_log_density.push_back(
          laplace_log_density(x - req.x_tilde[i], req.scale_x) +
          laplace_log_density(y - req.y_tilde[i], req.scale_y));
    }
  }
  return out;
}

std::vector<double> fixed_design_slopes(std::span<const double> x,
                                        const FixedDesignNoise& model,
                                        std::size_t replicates,
                                        const Stream& rng) {
  std::vector<double> slopes;
  for (std::size_t r = 0; r < replicates; ++r) {
    Stream s = rng.child(static_cast<std::uint64_t>(r));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xt, yt;
    for (double xi : x) {
      const double u = model.sigma_u > 0 ? laplace_draw(s, model.sigma_u / std::sqrt(2.0)) : 0.0;
      const double e = normal(s);
      const double v = model.sigma_v > 0 ? laplace_draw(s, model.sigma_v / std::sqrt(2.0)) : 0.0;
      xt.push_back(xi + u);
      yt.push_back(model.beta0 + model.beta1 * xi + model.sigma * e + v);
    }
    try {
      slopes.push_back(ols(xt, yt).beta1);
    } catch (const Error&) {
      slopes.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return slopes;
}

AbcBatch abc_batch(const AbcBatchRequest& req, std::uint64_t first,
                   std::size_t count, const Stream& rng) {
  AbcBatch out;
  for (std::size_t j = 0; j < count; ++j) {
    Stream s = rng.child(first + j);
    std::poisson_distribution<std::int64_t> pois(req.model.lambda);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::Vector2d beta = req.prior.sample(s);
    const double u = s.uniform();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < req.x_tilde.size(); ++i) {
      const double xi = static_cast<double>(pois(s));
      x.push_back(xi);
      y.push_back(beta(0) + beta(1) * xi + req.model.sigma * normal(s));
    }
    const double log_acc = abc_log_acceptance(req.x_tilde, req.y_tilde,
                                               req.scale_x, req.scale_y, x, y);
    out.accepted.push_back(log_acc > std::log(u) ? 1 : 0);
    out.beta.push_back(beta);
  }
  return out;
}

std::vector<std::int32_t> toy_abc_batch(const DiscreteToy& toy,
                                        const ToyData& s_tilde,
                                        std::uint64_t first, std::size_t count,
                                        const Stream& rng) {
  const internal::ToySampler sampler(toy);
  std::vector<std::int32_t> out;
  for (std::size_t j = 0; j < count; ++j) {
    Stream s = rng.child(first + j);
    const std::size_t b = sampler.draw_beta(s);
    ToyData data{std::vector<std::int64_t>(toy.n), std::vector<std::int64_t>(toy.n)};
    sampler.draw_data(b, s, data.x.data(), data.y.data());
    const double u = s.uniform();
    const bool accept = sampler.log_accept(s_tilde, data.x.data(), data.y.data()) > std::log(u);
    out.push_back(accept ? static_cast<std::int32_t>(b) : -1);
  }
  return out;
}

std::vector<double> dissimilarity_replicates(const CountyTable& table,
                                             PrivacyBudget eps,
                                             std::size_t replicates,
                                             const Stream& rng) {
  std::vector<double> out;
  for (std::size_t r = 0; r < replicates; ++r) {
    Stream s = rng.child(static_cast<std::uint64_t>(r));
    CountyTable noisy;
    for (std::size_t i = 0; i < table.w.size(); ++i) {
      noisy.w.push_back(table.w[i] + static_cast<double>(double_geometric_noise(s, eps)));
      noisy.b.push_back(table.b[i] + static_cast<double>(double_geometric_noise(s, eps)));
    }
    noisy.w_cty = table.w_cty + static_cast<double>(double_geometric_noise(s, eps));
    noisy.b_cty = table.b_cty + static_cast<double>(double_geometric_noise(s, eps));
    try {
      out.push_back(dissimilarity(noisy));
    } catch (const Error&) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

}  // namespace tprivacy::reference
