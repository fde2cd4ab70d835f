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
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace tprivacy {

enum class FitMethod { naive, mcem, abc };

std::string_view method_name(FitMethod method);

struct FitResult {
  double beta0 = 0;
  double beta1 = 0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  double residual_variance = 0;
  FitMethod method = FitMethod::naive;
  std::size_t n = 0;

  Eigen::Vector2d theta() const { return {beta0, beta1}; }
};

// Classical least squares: covariance s^2 (X'X)^-1 with s^2 on n - 2 degrees
// of freedom. Applied to privatized pairs this is the naive analysis.
FitResult ols(std::span<const double> x, std::span<const double> y);

// Large-sample limit of the naive slope: V(x) / (V(x) + sigma_u^2) * beta1.
double attenuation_limit(double var_x, double sigma_u_sq, double beta1);

// Large-sample limit of the naive intercept.
double intercept_limit(double mean_x, double var_x, double sigma_u_sq,
                       double beta0, double beta1);

// sigma^2 + beta1^2 sigma_u^2 + sigma_v^2: the variance of
// y~ - beta0 - beta1 x~ around the true line.
double residual_variance_inflated(double sigma_sq, double beta1,
                                  double sigma_u_sq, double sigma_v_sq);

}  // namespace tprivacy
