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
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tprivacy/mechanisms.hpp"
#include "tprivacy/random.hpp"
#include "tprivacy/simulate.hpp"

namespace tprivacy {

// Proper prior on (beta0, beta1).
struct PriorSpec {
  enum class Kind { uniform_box, independent_normal };
  Kind kind = Kind::uniform_box;
  // uniform_box: [lo0, hi0] x [lo1, hi1]. A zero-width side is a point mass.
  // independent_normal: means (lo0, lo1) and sds (hi0, hi1).
  double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;

  static PriorSpec box(double lo0, double hi0, double lo1, double hi1);
  static PriorSpec normal(double mean0, double sd0, double mean1, double sd1);

  void validate() const;
  Eigen::Vector2d sample(Stream& rng) const;
};

// Known nuisance parameters of the regression model.
struct AbcModel {
  double sigma = 5;
  double lambda = 10;
};

struct AbcOptions {
  std::size_t batch = 1 << 15;
  // Infeasibility probe: after this many proposals an acceptance rate below
  // min_rate aborts with infeasible-abc.
  std::size_t probe = 10'000'000;
  double min_rate = 1e-8;
  // Hard cap on proposals; zero means no cap.
  std::size_t max_proposals = 0;
};

struct AbcResult {
  std::vector<Eigen::Vector2d> draws;
  std::size_t proposals = 0;
  double acceptance_rate = 0;
};

// log of prod_i f(x~_i - x_i) f(y~_i - y_i) / f(0)^{2n}. Never positive.
double abc_log_acceptance(std::span<const double> x_tilde,
                          std::span<const double> y_tilde, double scale_x,
                          double scale_y, std::span<const double> x,
                          std::span<const double> y);

// Exact rejection sampler for the posterior given a transparent release:
// beta ~ prior, s ~ model(beta), accept with the mechanism density ratio to
// its mode. Accepted values are exact posterior draws. Proposal j uses
// rng.child(j); acceptances are kept in proposal order.
AbcResult abc_exact_posterior(const PrivatizedDataset& data, const PriorSpec& prior,
                              const AbcModel& model, std::size_t draws,
                              const Stream& rng, const AbcOptions& options = {});

// ---------------------------------------------------------------------------
// Discrete test bed with finite supports, where every posterior can be
// computed by exhaustive summation.
//
//   x_i ~ Poisson(x_lambda) truncated to [x_min, x_max]
//   y_i | x_i ~ discretized N(beta0 + beta1 x_i, sigma^2) on [y_min, y_max]
//   released x~_i = x_i + U, y~_i = y_i + V, U, V double geometric.

struct ToyData {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;
};

struct DiscreteToy {
  std::vector<Eigen::Vector2d> beta_grid;
  std::vector<double> prior;  // mass per grid point, sums to 1
  std::int64_t x_min = 0, x_max = 2;
  double x_lambda = 1;
  std::int64_t y_min = 0, y_max = 3;
  double sigma = 1;
  std::size_t n = 2;
  MechanismSpec mechanism = MechanismSpec{Family::double_geometric, 1.0,
                                          PrivacyBudget(1.0)};

  void validate() const;
  std::size_t x_count() const { return static_cast<std::size_t>(x_max - x_min + 1); }
  std::size_t y_count() const { return static_cast<std::size_t>(y_max - y_min + 1); }
  // Number of confidential datasets, (x_count * y_count)^n.
  std::size_t state_count() const;

  double log_px(std::int64_t x) const;
  double log_py(std::int64_t y, std::int64_t x, const Eigen::Vector2d& beta) const;
  double log_likelihood(const ToyData& s, const Eigen::Vector2d& beta) const;
  // log p(s~ | s) under the toy's mechanism, or under `budget` if given.
  double log_mechanism(const ToyData& s_tilde, const ToyData& s,
                       std::optional<PrivacyBudget> budget = std::nullopt) const;

  DiscreteToy with_budget(PrivacyBudget budget) const;

  ToyData sample_confidential(const Eigen::Vector2d& beta, Stream& rng) const;
  ToyData privatize(const ToyData& s, Stream& rng) const;
};

// A random toy: grid, prior, supports and budget drawn from rng.
DiscreteToy random_toy(Stream& rng);

// pi(beta | s~) proportional to pi0(beta) sum_s p(s~ | s) L(s | beta).
std::vector<double> grid_posterior_oracle(const DiscreteToy& toy,
                                          const ToyData& s_tilde);

struct MixtureOracle {
  std::vector<double> posterior;
  // pi(s | s~) over confidential datasets in enumeration order.
  std::vector<double> predictive;
};

// The same posterior assembled as a mixture of confidential-data posteriors
// pi(beta | s) weighted by the predictive pi(s | s~).
MixtureOracle mixture_posterior_oracle(const DiscreteToy& toy,
                                       const ToyData& s_tilde);

// Decodes enumeration index -> confidential dataset.
ToyData toy_state(const DiscreteToy& toy, std::size_t index);

struct MisreportReport {
  Eigen::Vector2d true_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d assumed_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d discrepancy = Eigen::Vector2d::Zero();  // assumed - true
};

// Posterior means under the mechanism actually used (true_eps) and under the
// analyst's belief (assumed_eps; nullopt means "no privacy noise at all").
MisreportReport misreported_mechanism_bias(const DiscreteToy& toy,
                                           const ToyData& s_tilde,
                                           PrivacyBudget true_eps,
                                           std::optional<PrivacyBudget> assumed_eps);

struct ToyAbcResult {
  std::vector<std::size_t> counts;  // accepted draws per grid point
  std::size_t accepted = 0;
  std::size_t proposals = 0;

  std::vector<double> histogram() const;
};

ToyAbcResult abc_toy_posterior(const DiscreteToy& toy, const ToyData& s_tilde,
                               std::size_t draws, const Stream& rng,
                               const AbcOptions& options = {});

double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace tprivacy
