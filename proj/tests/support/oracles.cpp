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

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/LU>

namespace tprivacy::testing {

PrivatizedDataset small_instance() {
  PrivatizedDataset d;
  d.x_tilde = {4.931, 8.745, 3.565, 2.692};
  d.y_tilde = {12.094, 20.945, 8.101, 7.469};
  d.spec_x = MechanismSpec::make(Family::laplace, 1, 2);
  d.spec_y = MechanismSpec::make(Family::laplace, 1, 2);
  return d;
}

namespace {

template <class F>
double simpson(F f, double lo, double hi, int grid) {
  const double h = (hi - lo) / grid;
  double sum = f(lo) + f(hi);
  for (int j = 1; j < grid; ++j) sum += (j % 2 ? 4 : 2) * f(lo + j * h);
  return sum * h / 3;
}

}  // namespace

double quadrature_log_likelihood(const PrivatizedDataset& d, double lambda,
                                 double sigma, double b0, double b1, int x_max) {
  const double bx = d.spec_x.scale(), by = d.spec_y.scale();
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double lik = 0;
    for (int x = 0; x <= x_max; ++x) {
      const double px = std::exp(x * std::log(lambda) - lambda - std::lgamma(x + 1.0));
      const double fx = std::exp(-std::abs(d.x_tilde[i] - x) / bx) / (2 * bx);
      if (px * fx < 1e-300) continue;
      const double mu = b0 + b1 * x;
      auto integrand = [&](double y) {
        const double z = (y - mu) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * std::numbers::pi)) *
               std::exp(-std::abs(d.y_tilde[i] - y) / by) / (2 * by);
      };
      const double lo = mu - 12 * sigma, hi = mu + 12 * sigma;
      const double kink = std::clamp(d.y_tilde[i], lo, hi);
      double integral = 0;
      if (kink > lo) integral += simpson(integrand, lo, kink, 400);
      if (kink < hi) integral += simpson(integrand, kink, hi, 400);
      lik += px * fx * integral;
    }
    total += std::log(lik);
  }
  return total;
}

Eigen::Vector2d quadrature_argmax(const PrivatizedDataset& d, double lambda,
                                  double sigma, const Box& start) {
  auto f = [&](const Eigen::Vector2d& b) {
    return quadrature_log_likelihood(d, lambda, sigma, b(0), b(1));
  };
  Eigen::Vector2d best(start.lo0, start.lo1);
  double best_val = -INFINITY;
  const double s0 = (start.hi0 - start.lo0) / 20, s1 = (start.hi1 - start.lo1) / 16;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 16; ++j) {
      const Eigen::Vector2d b(start.lo0 + i * s0, start.lo1 + j * s1);
      const double v = f(b);
      if (v > best_val) {
        best_val = v;
        best = b;
      }
    }
  }
  const double h = 1e-3;
  const Eigen::Vector2d e0(h, 0), e1(0, h);
  for (int it = 0; it < 50; ++it) {
    const double f0 = f(best);
    const Eigen::Vector2d g((f(best + e0) - f(best - e0)) / (2 * h),
                            (f(best + e1) - f(best - e1)) / (2 * h));
    Eigen::Matrix2d H;
    H(0, 0) = (f(best + e0) - 2 * f0 + f(best - e0)) / (h * h);
    H(1, 1) = (f(best + e1) - 2 * f0 + f(best - e1)) / (h * h);
    H(0, 1) = H(1, 0) = (f(best + e0 + e1) - f(best + e0 - e1) - f(best - e0 + e1) +
                         f(best - e0 - e1)) /
                        (4 * h * h);
    Eigen::Vector2d step = -H.inverse() * g;
    // Not concave here: fall back to a short gradient step.
    if (H.determinant() <= 0 || H(0, 0) >= 0) step = 0.01 * g;
    double t = 1;
    while (t > 1e-6 && f(best + t * step) < f0) t /= 2;
    best += t * step;
    if ((t * step).norm() < 1e-7) break;
  }
  return best;
}

Eigen::Vector2d quadrature_posterior_mean(const PrivatizedDataset& d, double lambda,
                                          double sigma, const Box& box, int grid) {
  const double h0 = (box.hi0 - box.lo0) / grid, h1 = (box.hi1 - box.lo1) / grid;
  std::vector<double> ll(static_cast<std::size_t>(grid) * grid);
  double top = -INFINITY;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double v = quadrature_log_likelihood(d, lambda, sigma, box.lo0 + (i + 0.5) * h0,
                                                 box.lo1 + (j + 0.5) * h1);
      ll[i * grid + j] = v;
      top = std::max(top, v);
    }
  }
  double z = 0, m0 = 0, m1 = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double w = std::exp(ll[i * grid + j] - top);
      z += w;
      m0 += w * (box.lo0 + (i + 0.5) * h0);
      m1 += w * (box.lo1 + (j + 0.5) * h1);
    }
  }
  return {m0 / z, m1 / z};
}

}  // namespace tprivacy::testing
