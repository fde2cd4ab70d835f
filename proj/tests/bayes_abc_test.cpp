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

#include "tprivacy/bayes_abc.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support/stats.hpp"
#include "tprivacy/error.hpp"

namespace tprivacy {
namespace {

DiscreteToy fixed_toy() {
  DiscreteToy t;
  t.beta_grid = {{0, 0.5}, {0.5, 1.0}, {1.0, 0.0}, {-0.5, 1.5}};
  t.prior = {0.25, 0.25, 0.25, 0.25};
  t.x_min = 0;
  t.x_max = 2;
  t.x_lambda = 1.2;
  t.y_min = -1;
  t.y_max = 3;
  t.sigma = 0.8;
  t.n = 3;
  t.mechanism = MechanismSpec::make(Family::double_geometric, 1, 1.0);
  return t;
}

ToyData fixed_release() { return ToyData{{1, 2, 0}, {1, 3, 0}}; }

TEST(DiscreteToyTest, DistributionsNormalize) {
  const DiscreteToy t = fixed_toy();
  double px = 0;
  for (std::int64_t x = t.x_min; x <= t.x_max; ++x) px += std::exp(t.log_px(x));
  EXPECT_NEAR(px, 1, 1e-14);
  for (const auto& b : t.beta_grid) {
    for (std::int64_t x = t.x_min; x <= t.x_max; ++x) {
      double py = 0;
      for (std::int64_t y = t.y_min; y <= t.y_max; ++y) py += std::exp(t.log_py(y, x, b));
      EXPECT_NEAR(py, 1, 1e-14);
    }
  }
  EXPECT_EQ(t.state_count(), 15u * 15u * 15u);
}

TEST(DiscreteToyTest, StateEnumerationIsABijection) {
  const DiscreteToy t = fixed_toy();
  double total = 0;
  for (std::size_t idx = 0; idx < t.state_count(); ++idx) {
    total += std::exp(t.log_likelihood(toy_state(t, idx), t.beta_grid[1]));
  }
  EXPECT_NEAR(total, 1, 1e-12);
}

TEST(GridOracleTest, SinglePointIsCertain) {
  DiscreteToy t = fixed_toy();
  t.beta_grid = {{0.3, 0.7}};
  t.prior = {1.0};
  const auto post = grid_posterior_oracle(t, fixed_release());
  ASSERT_EQ(post.size(), 1u);
  EXPECT_NEAR(post[0], 1.0, 1e-15);
}

TEST(GridOracleTest, NoiseFreeMechanismUsesReleaseAsData) {
  const DiscreteToy t = fixed_toy().with_budget(PrivacyBudget(60));
  const ToyData s = fixed_release();
  const auto post = grid_posterior_oracle(t, s);
  std::vector<double> want(t.beta_grid.size());
  double z = 0;
  for (std::size_t b = 0; b < want.size(); ++b) {
    want[b] = t.prior[b] * std::exp(t.log_likelihood(s, t.beta_grid[b]));
    z += want[b];
  }
  for (std::size_t b = 0; b < want.size(); ++b) EXPECT_NEAR(post[b], want[b] / z, 1e-12);
}

TEST(GridOracleTest, AgreesWithMixtureOracle) {
  const DiscreteToy t = fixed_toy();
  const auto grid = grid_posterior_oracle(t, fixed_release());
  const MixtureOracle mix = mixture_posterior_oracle(t, fixed_release());
  double pred = 0;
  for (double p : mix.predictive) pred += p;
  EXPECT_NEAR(pred, 1.0, 1e-12);
  for (std::size_t b = 0; b < grid.size(); ++b) EXPECT_NEAR(grid[b], mix.posterior[b], 1e-12);
}

TEST(GridOracleTest, AgreesWithMixtureOnRandomToys) {
  const Stream root(31);
  for (std::uint64_t r = 0; r < 20; ++r) {
    Stream s = root.child(r);
    const DiscreteToy t = random_toy(s);
    const ToyData conf = t.sample_confidential(t.beta_grid[0], s);
    const ToyData rel = t.privatize(conf, s);
    const auto grid = grid_posterior_oracle(t, rel);
    const auto mix = mixture_posterior_oracle(t, rel).posterior;
    for (std::size_t b = 0; b < grid.size(); ++b) {
      EXPECT_NEAR(grid[b], mix[b], 1e-8) << "toy " << r;
    }
  }
}

TEST(MixtureOracleTest, SingleReachableStateCollapses) {
  // With a one-point support for x and y there is exactly one dataset.
  DiscreteToy t = fixed_toy();
  t.x_min = t.x_max = 1;
  t.y_min = t.y_max = 2;
  const ToyData rel{{0, 4, 1}, {2, 2, -3}};
  const MixtureOracle mix = mixture_posterior_oracle(t, rel);
  ASSERT_EQ(mix.predictive.size(), 1u);
  EXPECT_NEAR(mix.predictive[0], 1.0, 1e-15);
  for (std::size_t b = 0; b < t.prior.size(); ++b) EXPECT_NEAR(mix.posterior[b], t.prior[b], 1e-12);
}

TEST(MisreportTest, CorrectBudgetHasNoDiscrepancy) {
  const DiscreteToy t = fixed_toy();
  const MisreportReport r =
      misreported_mechanism_bias(t, fixed_release(), PrivacyBudget(0.7), PrivacyBudget(0.7));
  EXPECT_LT(r.discrepancy.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MisreportTest, WrongBudgetMovesTheMean) {
  const DiscreteToy t = fixed_toy();
  const MisreportReport r =
      misreported_mechanism_bias(t, fixed_release(), PrivacyBudget(0.7), PrivacyBudget(3));
  EXPECT_GT(r.discrepancy.cwiseAbs().maxCoeff(), 1e-4);
}

TEST(MisreportTest, PointMassPriorIsImmune) {
  DiscreteToy t = fixed_toy();
  t.prior = {1 - 3e-15, 1e-15, 1e-15, 1e-15};
  const MisreportReport r =
      misreported_mechanism_bias(t, fixed_release(), PrivacyBudget(0.7), std::nullopt);
  EXPECT_LT(r.discrepancy.cwiseAbs().maxCoeff(), 1e-9);
}

// Ignoring the noise makes x look more spread than it is, and the slope
// posterior shrinks toward zero.
TEST(MisreportTest, IgnoringPrivacyAttenuatesSlope) {
  DiscreteToy t;
  for (int i = 0; i <= 8; ++i) t.beta_grid.emplace_back(0.0, 0.25 * i);
  t.prior.assign(t.beta_grid.size(), 1.0 / 9);
  t.x_min = 0;
  t.x_max = 3;
  t.x_lambda = 1.5;
  t.y_min = 0;
  t.y_max = 6;
  t.sigma = 0.6;
  t.n = 3;
  t.mechanism = MechanismSpec::make(Family::double_geometric, 1, 0.8);
  // Release with a noisy x spread far beyond what the y spread supports.
  const ToyData rel{{0, 3, 1}, {2, 4, 3}};
  const MisreportReport r = misreported_mechanism_bias(t, rel, PrivacyBudget(0.8), std::nullopt);
  EXPECT_LT(r.assumed_mean(1), r.true_mean(1));
}

TEST(ToyAbcTest, MatchesGridOracle) {
  const DiscreteToy t = fixed_toy();
  const ToyData rel = fixed_release();
  const auto oracle = grid_posterior_oracle(t, rel);
  const ToyAbcResult r = abc_toy_posterior(t, rel, 100000, Stream(41));
  EXPECT_EQ(r.accepted, 100000u);
  EXPECT_LT(total_variation(r.histogram(), oracle), 0.02);
}

TEST(ToyAbcTest, ExactReleaseDatasetAlwaysAccepted) {
  // One support point and a release equal to it: every proposal matches.
  DiscreteToy t = fixed_toy();
  t.x_min = t.x_max = 1;
  t.y_min = t.y_max = 2;
  const ToyData rel{{1, 1, 1}, {2, 2, 2}};
  const ToyAbcResult r = abc_toy_posterior(t, rel, 1000, Stream(1));
  EXPECT_EQ(r.proposals, 1000u);
}

TEST(ToyAbcTest, InfeasibleProbeFires) {
  DiscreteToy t = fixed_toy().with_budget(PrivacyBudget(30));
  const ToyData rel{{50, 50, 50}, {50, 50, 50}};
  AbcOptions opt;
  opt.batch = 4096;
  opt.probe = 20000;
  opt.min_rate = 1e-3;
  try {
    abc_toy_posterior(t, rel, 10, Stream(1), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible_abc);
  }
}

TEST(AbcLogAcceptanceTest, ValidProbability) {
  const std::vector<double> xt = {1, 2}, yt = {3, 4};
  EXPECT_EQ(abc_log_acceptance(xt, yt, 2, 3, xt, yt), 0.0);
  Stream rng(2);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> x = {rng.uniform() * 10, rng.uniform() * 10};
    const std::vector<double> y = {rng.uniform() * 10, rng.uniform() * 10};
    const double la = abc_log_acceptance(xt, yt, 2, 3, x, y);
    ASSERT_LE(la, 0.0);
    // Equals the mechanism density ratio to its mode.
    double want = 0;
    for (int k = 0; k < 2; ++k) {
      want += laplace_log_density(xt[k] - x[k], 2) - laplace_log_density(0, 2) +
              laplace_log_density(yt[k] - y[k], 3) - laplace_log_density(0, 3);
    }
    ASSERT_NEAR(la, want, 1e-12);
  }
}

PrivatizedDataset continuous_release() {
  PrivatizedDataset d;
  d.x_tilde = {2.3, 0.4, 3.1};
  d.y_tilde = {2.0, 0.9, 2.4};
  d.spec_x = MechanismSpec::make(Family::laplace, 1, 1);
  d.spec_y = MechanismSpec::make(Family::laplace, 1, 1);
  return d;
}

TEST(AbcExactTest, PointMassPriorReturnsThePoint) {
  const PriorSpec prior = PriorSpec::box(0.5, 0.5, 0.25, 0.25);
  const AbcResult r = abc_exact_posterior(continuous_release(), prior, {0.5, 2}, 100, Stream(3));
  ASSERT_EQ(r.draws.size(), 100u);
  for (const auto& b : r.draws) {
    EXPECT_EQ(b(0), 0.5);
    EXPECT_EQ(b(1), 0.25);
  }
  EXPECT_GT(r.acceptance_rate, 0);
}

TEST(AbcExactTest, DeterministicAndBatchInvariant) {
  const PriorSpec prior = PriorSpec::box(-2, 2, -1, 2);
  AbcOptions small;
  small.batch = 1000;
  AbcOptions large;
  large.batch = 50000;
  const AbcResult a = abc_exact_posterior(continuous_release(), prior, {0.5, 2}, 200, Stream(4), small);
  const AbcResult b = abc_exact_posterior(continuous_release(), prior, {0.5, 2}, 200, Stream(4), large);
  EXPECT_EQ(a.proposals, b.proposals);
  ASSERT_EQ(a.draws.size(), b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); ++i) EXPECT_EQ(a.draws[i], b.draws[i]);
}

TEST(AbcExactTest, McSeHalvesWhenDrawsQuadruple) {
  // Doubling the draws shrinks the standard error of the mean by sqrt(2);
  // quadrupling halves it.
  const PriorSpec prior = PriorSpec::box(-2, 2, -1, 2);
  const AbcResult r = abc_exact_posterior(continuous_release(), prior, {0.5, 2}, 8000, Stream(5));
  std::vector<double> b1;
  for (const auto& b : r.draws) b1.push_back(b(1));
  const std::vector<double> quarter(b1.begin(), b1.begin() + 2000);
  const std::vector<double> half(b1.begin(), b1.begin() + 4000);
  const double ratio_double = testing::mean_se(half) / testing::mean_se(b1);
  const double ratio_quad = testing::mean_se(quarter) / testing::mean_se(b1);
  EXPECT_GT(ratio_double, std::sqrt(2.0) / 1.5);
  EXPECT_LT(ratio_double, std::sqrt(2.0) * 1.5);
  EXPECT_GT(ratio_quad, 2 / 1.5);
  EXPECT_LT(ratio_quad, 2 * 1.5);
}

TEST(AbcExactTest, InfeasibleReleaseIsReported) {
  PrivatizedDataset d = continuous_release();
  d.y_tilde = {500, -500, 500};
  d.spec_y = MechanismSpec::make(Family::laplace, 1, 10);
  AbcOptions opt;
  opt.batch = 10000;
  opt.probe = 50000;
  try {
    abc_exact_posterior(d, PriorSpec::box(-1, 1, -1, 1), {0.5, 2}, 10, Stream(6), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible_abc);
  }
}

TEST(PriorSpecTest, Validation) {
  EXPECT_THROW(PriorSpec::box(1, 0, 0, 1), Error);
  EXPECT_THROW(PriorSpec::normal(0, 0, 0, 1), Error);
  Stream rng(1);
  const PriorSpec n = PriorSpec::normal(1, 2, -1, 0.5);
  std::vector<double> b0;
  for (int i = 0; i < 20000; ++i) b0.push_back(n.sample(rng)(0));
  EXPECT_NEAR(testing::mean(b0), 1, 4 * 2 / std::sqrt(20000.0));
}

TEST(TotalVariationTest, Basics) {
  const std::vector<double> p = {0.5, 0.5, 0}, q = {0, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(total_variation(p, q), 0.5);
  EXPECT_DOUBLE_EQ(total_variation(p, p), 0);
}

}  // namespace
}  // namespace tprivacy
