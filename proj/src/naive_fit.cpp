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

#include "tprivacy/naive_fit.hpp"

#include <cmath>
#include <limits>

#include "tprivacy/error.hpp"

namespace tprivacy {

std::string_view method_name(FitMethod method) {
  switch (method) {
    case FitMethod::naive:
      return "naive";
    case FitMethod::mcem:
      return "mcem";
    case FitMethod::abc:
      return "abc";
  }
  return "unknown";
}

FitResult ols(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "ols: x and y must have equal lengths");
  const std::size_t n = x.size();
  require(n >= 3, "ols: need at least three observations");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (!(sxx > 0)) fail(ErrorCode::degenerate_design, "ols: x is constant");

  FitResult fit;
  fit.method = FitMethod::naive;
  fit.n = n;
  fit.beta1 = sxy / sxx;
  fit.beta0 = my - fit.beta1 * mx;

  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.beta0 - fit.beta1 * x[i];
    rss += r * r;
  }
  fit.residual_variance = rss / static_cast<double>(n - 2);

  // (X'X)^-1 = 1/sxx * [[sum x^2 / n, -mx], [-mx, 1]]
  const double s2 = fit.residual_variance;
  const double var_b1 = s2 / sxx;
  fit.covariance(0, 0) = s2 / static_cast<double>(n) + mx * mx * var_b1;
  fit.covariance(0, 1) = -mx * var_b1;
  fit.covariance(1, 0) = fit.covariance(0, 1);
  fit.covariance(1, 1) = var_b1;
  return fit;
}

double attenuation_limit(double var_x, double sigma_u_sq, double beta1) {
  require(var_x > 0, "attenuation_limit: var_x must be positive");
  require(sigma_u_sq >= 0, "attenuation_limit: sigma_u^2 must be nonnegative");
  if (std::isinf(sigma_u_sq)) return 0.0 * beta1;
  return var_x / (var_x + sigma_u_sq) * beta1;
}

double intercept_limit(double mean_x, double var_x, double sigma_u_sq,
                       double beta0, double beta1) {
  require(var_x > 0, "intercept_limit: var_x must be positive");
  require(sigma_u_sq >= 0, "intercept_limit: sigma_u^2 must be nonnegative");
  const double shrink =
      std::isinf(sigma_u_sq) ? 1.0 : sigma_u_sq / (var_x + sigma_u_sq);
  return beta0 + shrink * mean_x * beta1;
}

double residual_variance_inflated(double sigma_sq, double beta1,
                                  double sigma_u_sq, double sigma_v_sq) {
  require(sigma_sq >= 0 && sigma_u_sq >= 0 && sigma_v_sq >= 0,
          "variances must be nonnegative");
  return sigma_sq + beta1 * beta1 * sigma_u_sq + sigma_v_sq;
}

}  // namespace tprivacy
