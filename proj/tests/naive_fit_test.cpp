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
#include <vector>

#include <gtest/gtest.h>

#include "support/stats.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/simulate.hpp"

namespace tprivacy {
namespace {

TEST(OlsTest, ExactLine) {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double xi : x) y.push_back(2 * xi + 1);
  const FitResult f = ols(x, y);
  EXPECT_NEAR(f.beta0, 1, 1e-12);
  EXPECT_NEAR(f.beta1, 2, 1e-12);
  EXPECT_NEAR(f.residual_variance, 0, 1e-24);
  EXPECT_EQ(f.method, FitMethod::naive);
  EXPECT_EQ(f.n, 5u);
}

TEST(OlsTest, ConstantDesign) {
  const std::vector<double> x = {3, 3, 3};
  const std::vector<double> y = {1, 2, 3};
  try {
    ols(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_design);
  }
}

// Hand-computed: x = 0..3, y = (1, 3, 2, 5).
TEST(OlsTest, ClassicalCovariance) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 2, 5};
  const FitResult f = ols(x, y);
  // sxx = 5, sxy = 5.5, b1 = 1.1, b0 = 2.75 - 1.65 = 1.1
  EXPECT_NEAR(f.beta1, 1.1, 1e-12);
  EXPECT_NEAR(f.beta0, 1.1, 1e-12);
  // residuals -0.1, 0.8, -1.3, 0.6: rss = 2.7, s2 = 1.35
  EXPECT_NEAR(f.residual_variance, 1.35, 1e-12);
  // s2 (X'X)^-1, X'X = [[4, 6], [6, 14]], det 20
  EXPECT_NEAR(f.covariance(0, 0), 1.35 * 14 / 20, 1e-12);
  EXPECT_NEAR(f.covariance(0, 1), -1.35 * 6 / 20, 1e-12);
  EXPECT_NEAR(f.covariance(1, 1), 1.35 * 4 / 20, 1e-12);
  EXPECT_EQ(f.covariance(0, 1), f.covariance(1, 0));
}

TEST(OlsTest, ConfidentialFitIsAccurate) {
  Stream rng(10);
  const ConfidentialDataset d = gen_confidential(10000, RegressionParams{}, rng);
  const FitResult f = ols(d.x_real(), d.y);
  EXPECT_NEAR(f.beta1, 4, 3 * std::sqrt(f.covariance(1, 1)));
}

TEST(OlsTest, UnbiasedOnConfidentialData) {
  const Stream root(11);
  std::vector<double> slopes;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    Stream s = root.child(r);
    const ConfidentialDataset d = gen_confidential(10, RegressionParams{}, s);
    try {
      slopes.push_back(ols(d.x_real(), d.y).beta1);
    } catch (const Error&) {
    }
  }
  EXPECT_NEAR(testing::mean(slopes), 4.0, 3 * testing::mean_se(slopes));
}

TEST(OlsTest, PrivatizedFitIsAttenuated) {
  Stream rng(12);
  const ConfidentialDataset d = gen_confidential(10000, RegressionParams{}, rng);
  const PrivatizedDataset p = privatize_dataset(d, PrivacyBudget(0.25), PrivacyBudget(0.25), rng);
  const FitResult f = ols(p.x_tilde, p.y_tilde);
  EXPECT_NEAR(f.beta1, attenuation_limit(10, 32, 4), 0.1);
  EXPECT_LT(f.beta1, 2);
}

TEST(LimitsTest, AttenuationValues) {
  EXPECT_NEAR(attenuation_limit(10, 32, 4), 40.0 / 42.0, 1e-15);
  EXPECT_NEAR(attenuation_limit(10, 32, 4), 0.95238, 5e-6);
  EXPECT_EQ(attenuation_limit(3, 0, 4), 4);
  EXPECT_EQ(attenuation_limit(3, INFINITY, 4), 0);
  EXPECT_THROW(attenuation_limit(0, 1, 1), Error);
}

TEST(LimitsTest, AttenuationMonotoneInNoise) {
  double prev = attenuation_limit(10, 0, 4);
  for (double su2 = 0.5; su2 < 200; su2 += 0.5) {
    const double cur = attenuation_limit(10, su2, 4);
    ASSERT_LT(cur, prev);
    prev = cur;
  }
}

TEST(LimitsTest, InterceptValues) {
  EXPECT_NEAR(intercept_limit(10, 10, 32, -5, 4), -5 + 32.0 / 42.0 * 40, 1e-12);
  EXPECT_NEAR(intercept_limit(10, 10, 32, -5, 4), 25.476, 5e-4);
  EXPECT_EQ(intercept_limit(10, 10, 0, -5, 4), -5);
  EXPECT_EQ(intercept_limit(0, 10, 32, -5, 4), -5);
}

TEST(LimitsTest, ResidualVarianceValues) {
  EXPECT_EQ(residual_variance_inflated(25, 4, 32, 32), 569);
  EXPECT_EQ(residual_variance_inflated(25, 4, 0, 0), 25);
}

TEST(FitMethodTest, Names) {
  EXPECT_EQ(method_name(FitMethod::naive), "naive");
  EXPECT_EQ(method_name(FitMethod::mcem), "mcem");
  EXPECT_EQ(method_name(FitMethod::abc), "abc");
}

}  // namespace
}  // namespace tprivacy
