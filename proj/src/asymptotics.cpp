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

#include "tprivacy/asymptotics.hpp"

#include <cmath>
#include <random>

#include "tprivacy/distributions.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"

namespace tprivacy {

FixedDesignMoments sample_moments(std::span<const double> x) {
  require(x.size() >= 2, "sample_moments: need at least two points");
  FixedDesignMoments m;
  m.n = x.size();
  const double n = static_cast<double>(x.size());
  for (double xi : x) m.mean_x += xi;
  m.mean_x /= n;
  for (double xi : x) {
    const double a2 = (xi - m.mean_x) * (xi - m.mean_x);
    m.v += a2;
    m.k += a2 * a2;
  }
  m.v /= n;
  m.k /= n;
  if (!(m.v > 0)) fail(ErrorCode::degenerate_design, "sample_moments: x is constant");
  return m;
}

double biasing_coefficient(const FixedDesignMoments& m, double sigma_u_sq) {
  require(m.v > 0, "biasing_coefficient: invalid moments");
  require(sigma_u_sq >= 0, "biasing_coefficient: sigma_u^2 must be nonnegative");
  if (std::isinf(sigma_u_sq)) return 0;
  return m.v / (m.v + sigma_u_sq);
}

double clt_variance(const FixedDesignMoments& m, double beta1, double sigma_sq,
                    double sigma_u_sq, double sigma_v_sq) {
  require(m.v > 0, "clt_variance: invalid moments");
  require(sigma_sq >= 0 && sigma_u_sq >= 0 && sigma_v_sq >= 0,
          "clt_variance: variances must be nonnegative");
  const double v = m.v;
  const double k = m.k;
  const double g = biasing_coefficient(m, sigma_u_sq);
  const double su2 = sigma_u_sq;
  const double total = v + su2;
  const double bracket = g * g * (k + 6 * su2 * v + 6 * su2 * su2) -
                         2 * g * (k + 3 * su2 * v) + k + su2 * v;
  // Split so that the noise-free case collapses to sigma^2 / v bit for bit.
  return beta1 * beta1 * bracket / (total * total) +
         (sigma_v_sq + sigma_sq) / total;
}

Interval distribution_limits(double gamma, double beta1, double sigma_tilde,
                             std::size_t n, double alpha) {
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(n >= 1 && sigma_tilde >= 0, "distribution_limits: invalid inputs");
  const double z = normal_quantile(1 - alpha / 2);
  const double half = z * std::sqrt(sigma_tilde / static_cast<double>(n));
  return {gamma * beta1 - half, gamma * beta1 + half};
}

CltSummary clt_summary(const FixedDesignMoments& m, double beta1, double sigma_sq,
                       double sigma_u_sq, double sigma_v_sq, double alpha) {
  CltSummary s;
  s.alpha = alpha;
  s.gamma = biasing_coefficient(m, sigma_u_sq);
  s.sigma_tilde = clt_variance(m, beta1, sigma_sq, sigma_u_sq, sigma_v_sq);
  const Interval lim = distribution_limits(s.gamma, beta1, s.sigma_tilde, m.n, alpha);
  s.center = s.gamma * beta1;
  s.half_width = (lim.upper - lim.lower) / 2;
  return s;
}

std::string_view convention_name(CoverageConvention::Kind kind) {
  return kind == CoverageConvention::Kind::privacy_aware_se ? "privacy_aware_se"
                                                            : "classical_se";
}

double limit_coverage(double gamma, double beta1, double sigma_tilde,
                      std::size_t n, double alpha,
                      const CoverageConvention& convention) {
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(n >= 1 && sigma_tilde >= 0, "limit_coverage: invalid inputs");
  const double z = normal_quantile(1 - alpha / 2);
  const double nn = static_cast<double>(n);
  const double sd = std::sqrt(sigma_tilde / nn);
  double se = sd;
  if (convention.kind == CoverageConvention::Kind::classical_se) {
    require(convention.v > 0 && convention.sigma_sq >= 0,
            "classical convention needs sigma^2 >= 0 and v > 0");
    se = std::sqrt(convention.sigma_sq / (nn * convention.v));
  }
  const double bias = std::abs((1 - gamma) * beta1);
  if (sd == 0) return bias <= z * se ? 1.0 : 0.0;
  const double delta = bias / sd;
  const double reach = z * se / sd;
  return normal_cdf(reach - delta) - normal_cdf(-reach - delta);
}

std::vector<CoverageCell> coverage_grid(std::span<const double> x, double beta1,
                                        double sigma_sq,
                                        std::span<const double> sigma_u_values,
                                        std::span<const double> sigma_v_values,
                                        double alpha,
                                        CoverageConvention::Kind convention) {
  for (double s : sigma_u_values) require(s >= 0, "sigma_u values must be >= 0");
  for (double s : sigma_v_values) require(s >= 0, "sigma_v values must be >= 0");
  const FixedDesignMoments m = sample_moments(x);
  const CoverageConvention conv =
      convention == CoverageConvention::Kind::classical_se
          ? CoverageConvention::classical(sigma_sq, m.v)
          : CoverageConvention::privacy_aware();

  const std::size_t nv = sigma_v_values.size();
  const std::size_t cells = sigma_u_values.size() * nv;
  std::vector<CoverageCell> out(cells);
  // Validation happened above; the loop body cannot throw.
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < cells; ++c) {
    const double su = sigma_u_values[c / nv];
    const double sv = sigma_v_values[c % nv];
    const double gamma = biasing_coefficient(m, su * su);
    const double st = clt_variance(m, beta1, sigma_sq, su * su, sv * sv);
    out[c] = {su, sv, convention, limit_coverage(gamma, beta1, st, m.n, alpha, conv)};
  }
  return out;
}

std::vector<double> standardized_design(Stream& rng, std::size_t n,
                                        double variance) {
  require(n >= 2 && variance > 0, "standardized_design: need n >= 2, variance > 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = normal(rng);
  const FixedDesignMoments m = sample_moments(x);
  const double scale = std::sqrt(variance / m.v);
  for (double& xi : x) xi = (xi - m.mean_x) * scale;
  return x;
}

std::vector<double> reference_design() {
  Stream rng(kReferenceDesignSeed);
  return standardized_design(rng, kReferenceDesignSize, kReferenceDesignVariance);
}

std::vector<double> simulate_fixed_design_slopes(std::span<const double> x,
                                                 const FixedDesignNoise& model,
                                                 std::size_t replicates,
                                                 const Stream& rng) {
  require(x.size() >= 3, "need at least three design points");
  require(model.sigma >= 0 && model.sigma_u >= 0 && model.sigma_v >= 0,
          "noise scales must be nonnegative");
  return kernels::fixed_design_slopes(x, model, replicates, rng);
}

}  // namespace tprivacy
