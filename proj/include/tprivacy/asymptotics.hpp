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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tprivacy/random.hpp"

namespace tprivacy {

// Unadjusted central moments of a fixed design.
struct FixedDesignMoments {
  double v = 0;  // (1/n) sum (x - mean)^2
  double k = 0;  // (1/n) sum (x - mean)^4
  std::size_t n = 0;
  double mean_x = 0;
};

FixedDesignMoments sample_moments(std::span<const double> x);

// gamma_n = v / (v + sigma_u^2)
double biasing_coefficient(const FixedDesignMoments& m, double sigma_u_sq);

// Asymptotic variance of sqrt(n) (b1_hat - gamma_n beta1) for the naive slope
// under a fixed design with additive Laplace noise on x (variance sigma_u^2)
// and on y (variance sigma_v^2).
double clt_variance(const FixedDesignMoments& m, double beta1, double sigma_sq,
                    double sigma_u_sq, double sigma_v_sq);

struct Interval {
  double lower = 0;
  double upper = 0;
};

// gamma beta1 +/- z_{1 - alpha/2} sqrt(sigma_tilde / n)
Interval distribution_limits(double gamma, double beta1, double sigma_tilde,
                             std::size_t n, double alpha);

struct CltSummary {
  double gamma = 1;
  double sigma_tilde = 0;
  double center = 0;
  double half_width = 0;
  double alpha = 0.05;
};

CltSummary clt_summary(const FixedDesignMoments& m, double beta1, double sigma_sq,
                       double sigma_u_sq, double sigma_v_sq, double alpha);

// How the standard error of the naive slope is formed when building the
// interval b1_hat +/- z SE whose coverage of beta1 is evaluated.
struct CoverageConvention {
  enum class Kind { privacy_aware_se, classical_se };
  Kind kind = Kind::privacy_aware_se;
  double sigma_sq = 0;  // classical only: SE = sqrt(sigma_sq / (n v))
  double v = 0;

  static CoverageConvention privacy_aware() { return {}; }
  static CoverageConvention classical(double sigma_sq, double v) {
    return {Kind::classical_se, sigma_sq, v};
  }
};

std::string_view convention_name(CoverageConvention::Kind kind);

// P(|b1_hat - beta1| <= z SE) with b1_hat ~ N(gamma beta1, sigma_tilde / n).
double limit_coverage(double gamma, double beta1, double sigma_tilde,
                      std::size_t n, double alpha,
                      const CoverageConvention& convention);

struct CoverageCell {
  double sigma_u = 0;
  double sigma_v = 0;
  CoverageConvention::Kind convention = CoverageConvention::Kind::privacy_aware_se;
  double coverage = 0;
};

// Evaluates limit_coverage on the Cartesian grid sigma_u x sigma_v (standard
// deviations, not variances). Rows come out sigma_u-major, in input order.
std::vector<CoverageCell> coverage_grid(std::span<const double> x, double beta1,
                                        double sigma_sq,
                                        std::span<const double> sigma_u_values,
                                        std::span<const double> sigma_v_values,
                                        double alpha,
                                        CoverageConvention::Kind convention);

// Seeded N(0, 1) draws affinely rescaled to have mean zero and unadjusted
// variance exactly `variance`. This is how the stored fixed design for the
// coverage study is built.
std::vector<double> standardized_design(Stream& rng, std::size_t n,
                                        double variance);

// The stored design of the coverage study: n = 500 points with v = 1.023,
// built by standardized_design from a fixed seed.
inline constexpr std::uint64_t kReferenceDesignSeed = 500;
inline constexpr std::size_t kReferenceDesignSize = 500;
inline constexpr double kReferenceDesignVariance = 1.023;
std::vector<double> reference_design();

struct FixedDesignNoise {
  double beta0 = 0;
  double beta1 = 0.5;
  double sigma = 1;
  double sigma_u = 0;  // sd of the Laplace noise on x
  double sigma_v = 0;  // sd of the Laplace noise on y
};

// Naive slopes from `replicates` privatized copies of a fixed design.
// Replicate r draws from rng.child(r).
std::vector<double> simulate_fixed_design_slopes(std::span<const double> x,
                                                 const FixedDesignNoise& model,
                                                 std::size_t replicates,
                                                 const Stream& rng);

}  // namespace tprivacy
