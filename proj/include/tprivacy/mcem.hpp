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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tprivacy/naive_fit.hpp"
#include "tprivacy/random.hpp"
#include "tprivacy/simulate.hpp"

namespace tprivacy {

// How importance weights are attached to the proposal datasets.
//
// joint: one weight per proposal dataset, the product of the mechanism
//   density over all records. This is the textbook recipe; its effective
//   sample size collapses quickly as n grows.
// per_record: the posterior of the confidential data given the release
//   factorizes over records, so each record gets its own weight vector
//   across the K proposals. Same proposal law, same fixed point, far lower
//   Monte Carlo variance.
enum class Weighting { per_record, joint };

std::string_view weighting_name(Weighting weighting);
Weighting parse_weighting(std::string_view name);

struct MCEMConfig {
  std::size_t k_samples = 5000;
  std::size_t max_iter = 100;
  double tol = 1e-3;
  double ess_floor = 0.01;
  double alpha = 0.05;
  // Treated as known.
  double sigma = 5;
  double lambda = 10;
  Weighting weighting = Weighting::per_record;

  void validate() const;
};

// K simulated confidential datasets of n records each, stored k-major, with
// the log mechanism density of every simulated record against the release.
struct ProposalSet {
  std::size_t k = 0;
  std::size_t n = 0;
  double sigma = 1;  // error sd of the law the proposals were drawn from
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> record_log_density;

  double x_at(std::size_t kk, std::size_t i) const { return x[kk * n + i]; }
  double y_at(std::size_t kk, std::size_t i) const { return y[kk * n + i]; }
};

struct MCEMState {
  std::size_t iter = 0;
  Eigen::Vector2d theta = Eigen::Vector2d::Zero();
  Weighting weighting = Weighting::per_record;
  std::size_t k = 0;
  std::size_t blocks = 0;  // 1 for joint weighting, n for per-record
  // Self-normalized log weights, block-major: entry b * k + j.
  std::vector<double> log_weights;
  double ess = 0;             // smallest effective sample size over blocks
  double max_log_weight = 0;  // largest raw joint log weight
  bool converged = false;

  double weight(std::size_t block, std::size_t j) const;
};

struct EStepResult {
  MCEMState state;
  ProposalSet samples;
};

// Draws K proposal datasets from the complete-data law at theta and weighs
// them against the release. Proposal k uses rng.child(k).
EStepResult e_step(const PrivatizedDataset& data, const Eigen::Vector2d& theta,
                   const MCEMConfig& config, const Stream& rng);

// Raw (unnormalized) log weights, block-major, for a given proposal set.
std::vector<double> raw_log_weights(const ProposalSet& samples,
                                    Weighting weighting);

// Normalizes log weights and fills the weight-related state fields.
MCEMState weigh(const ProposalSet& samples, Weighting weighting,
                const Eigen::Vector2d& theta);

Eigen::Vector2d m_step(const MCEMState& state, const ProposalSet& samples);

// Louis-type observed information: weighted complete-data information minus
// the weighted score covariance, assembled block by block.
Eigen::Matrix2d observed_fisher(const MCEMState& state,
                                const ProposalSet& samples,
                                const Eigen::Vector2d& theta);

struct ScoreCheck {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d standard_error = Eigen::Vector2d::Zero();
};

// Weighted mean observed-data score at theta with its delta-method Monte
// Carlo standard error.
ScoreCheck weighted_score(const MCEMState& state, const ProposalSet& samples,
                          const Eigen::Vector2d& theta);

struct Ellipse {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Matrix2d shape = Eigen::Matrix2d::Identity();  // precision matrix
  double level = 0;  // chi-square(2) quantile

  bool contains(const Eigen::Vector2d& point) const;
  double area() const;
};

// {beta : (beta - theta_hat)' F (beta - theta_hat) <= chi2_2(1 - alpha)}
Ellipse confidence_ellipse(const Eigen::Vector2d& theta_hat,
                           const Eigen::Matrix2d& fisher, double alpha);

struct TraceRow {
  std::size_t iter = 0;
  double beta0 = 0;
  double beta1 = 0;
  double ess = 0;
  double max_log_weight = 0;
  std::size_t k_samples = 0;
};

struct MCEMResult {
  FitResult fit;
  std::optional<Ellipse> ellipse;
  std::optional<std::string> ellipse_error;
  Eigen::Matrix2d fisher = Eigen::Matrix2d::Zero();
  ScoreCheck score;
  std::vector<TraceRow> trace;
  bool converged = false;
  std::size_t k_samples = 0;  // after any doubling
};

// Starts from the naive least-squares fit and alternates E and M steps until
// the max-norm parameter change stays below tol for two consecutive
// iterations, or max_iter is reached. If the effective sample size fraction
// drops below ess_floor, K is doubled once. The information matrix is
// evaluated on a fresh E-step at the final estimate.
MCEMResult run_mcem(const PrivatizedDataset& data, const MCEMConfig& config,
                    const Stream& rng);

}  // namespace tprivacy
