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

#include "tprivacy/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "internal/toy_sampler.hpp"
#include "tprivacy/mechanisms.hpp"

namespace tprivacy {

void set_num_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

ProposalSet draw_proposals(const ProposalRequest& req, const Stream& rng) {
  const std::size_t n = req.x_tilde.size();
  ProposalSet out;
  out.k = req.k;
  out.n = n;
  out.sigma = req.sigma;
  out.x.resize(req.k * n);
  out.y.resize(req.k * n);
  out.record_log_density.resize(req.k * n);

  const double cx = -std::log(2 * req.scale_x);
  const double cy = -std::log(2 * req.scale_y);
  const auto count = static_cast<std::int64_t>(req.k);

#pragma omp parallel
  {
    std::poisson_distribution<std::int64_t> pois(req.lambda);
    std::normal_distribution<double> normal(0.0, 1.0);
#pragma omp for schedule(static)
    for (std::int64_t kk = 0; kk < count; ++kk) {
      Stream s = rng.child(static_cast<std::uint64_t>(kk));
      pois.reset();
      normal.reset();
      const std::size_t base = static_cast<std::size_t>(kk) * n;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(pois(s));
        const double e = normal(s);
        const double y = req.beta0 + req.beta1 * x + req.sigma * e;
        out.x[base + i] = x;
        out.y[base + i] = y;
        out.record_log_density[base + i] =
            (cx - std::abs(x - req.x_tilde[i]) / req.scale_x) +
            (cy - std::abs(y - req.y_tilde[i]) / req.scale_y);
      }
    }
  }
  return out;
}

std::vector<double> fixed_design_slopes(std::span<const double> x,
                                        const FixedDesignNoise& model,
                                        std::size_t replicates,
                                        const Stream& rng) {
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  const double bu = model.sigma_u / std::sqrt(2.0);
  const double bv = model.sigma_v / std::sqrt(2.0);
  std::vector<double> slopes(replicates);
  const auto count = static_cast<std::int64_t>(replicates);

#pragma omp parallel
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xt(n), yt(n);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < count; ++r) {
      Stream s = rng.child(static_cast<std::uint64_t>(r));
      normal.reset();
      for (std::size_t i = 0; i < n; ++i) {
        const double u = bu > 0 ? laplace_draw(s, bu) : 0.0;
        const double e = normal(s);
        const double v = bv > 0 ? laplace_draw(s, bv) : 0.0;
        xt[i] = x[i] + u;
        yt[i] = model.beta0 + model.beta1 * x[i] + model.sigma * e + v;
      }
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < n; ++i) {
        mx += xt[i];
        my += yt[i];
      }
      mx /= nn;
      my /= nn;
      double sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = xt[i] - mx;
        sxx += dx * dx;
        sxy += dx * (yt[i] - my);
      }
      slopes[static_cast<std::size_t>(r)] =
          sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return slopes;
}

AbcBatch abc_batch(const AbcBatchRequest& req, std::uint64_t first,
                   std::size_t count, const Stream& rng) {
  const std::size_t n = req.x_tilde.size();
  AbcBatch out;
  out.accepted.assign(count, 0);
  out.beta.assign(count, Eigen::Vector2d::Zero());
  const auto total = static_cast<std::int64_t>(count);

#pragma omp parallel
  {
    std::poisson_distribution<std::int64_t> pois(req.model.lambda);
    std::normal_distribution<double> normal(0.0, 1.0);
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < total; ++j) {
      Stream s = rng.child(first + static_cast<std::uint64_t>(j));
      pois.reset();
      normal.reset();
      const Eigen::Vector2d beta = req.prior.sample(s);
      const double log_u = std::log(s.uniform());
      double log_acc = 0;
      bool alive = true;
      // Terms are nonpositive, so the running sum can only fall: stop as soon
      // as it drops below log u.
      for (std::size_t i = 0; i < n && alive; ++i) {
        const double x = static_cast<double>(pois(s));
        const double y = beta(0) + beta(1) * x + req.model.sigma * normal(s);
        log_acc += -std::abs(req.x_tilde[i] - x) / req.scale_x -
                   std::abs(req.y_tilde[i] - y) / req.scale_y;
        alive = log_acc > log_u;
      }
      out.accepted[static_cast<std::size_t>(j)] = alive ? 1 : 0;
      out.beta[static_cast<std::size_t>(j)] = beta;
    }
  }
  return out;
}

std::vector<std::int32_t> toy_abc_batch(const DiscreteToy& toy,
                                        const ToyData& s_tilde,
                                        std::uint64_t first, std::size_t count,
                                        const Stream& rng) {
  const internal::ToySampler sampler(toy);
  const std::size_t n = sampler.n();
  std::vector<std::int32_t> out(count, -1);
  const auto total = static_cast<std::int64_t>(count);

#pragma omp parallel
  {
    std::vector<std::int64_t> x(n), y(n);
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < total; ++j) {
      Stream s = rng.child(first + static_cast<std::uint64_t>(j));
      const std::size_t b = sampler.draw_beta(s);
      sampler.draw_data(b, s, x.data(), y.data());
      const double log_u = std::log(s.uniform());
      if (sampler.log_accept(s_tilde, x.data(), y.data()) > log_u) {
        out[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(b);
      }
    }
  }
  return out;
}

std::vector<double> dissimilarity_replicates(const CountyTable& table,
                                             PrivacyBudget eps,
                                             std::size_t replicates,
                                             const Stream& rng) {
  const std::size_t tracts = table.w.size();
  std::vector<double> out(replicates);
  const auto total = static_cast<std::int64_t>(replicates);

#pragma omp parallel
  {
    std::vector<double> wt(tracts), bt(tracts);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < total; ++r) {
      Stream s = rng.child(static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < tracts; ++i) {
        wt[i] = table.w[i] + static_cast<double>(double_geometric_noise(s, eps));
        bt[i] = table.b[i] + static_cast<double>(double_geometric_noise(s, eps));
      }
      const double wc = table.w_cty + static_cast<double>(double_geometric_noise(s, eps));
      const double bc = table.b_cty + static_cast<double>(double_geometric_noise(s, eps));
      double d = std::numeric_limits<double>::quiet_NaN();
      if (wc > 0 && bc > 0) {
        double sum = 0;
        for (std::size_t i = 0; i < tracts; ++i) sum += std::abs(wt[i] / wc - bt[i] / bc);
        d = 0.5 * sum;
      }
      out[static_cast<std::size_t>(r)] = d;
    }
  }
  return out;
}

}  // namespace kernels
}  // namespace tprivacy
