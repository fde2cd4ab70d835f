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

#include "tprivacy/mcem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "tprivacy/distributions.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"

namespace tprivacy {

std::string_view weighting_name(Weighting weighting) {
  return weighting == Weighting::joint ? "joint" : "per-record";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "joint") return Weighting::joint;
  if (name == "per-record" || name == "per_record") return Weighting::per_record;
  fail(ErrorCode::invalid_argument, "unknown weighting '" + std::string(name) + "'");
}

void MCEMConfig::validate() const {
  require(k_samples >= 2, "k_samples must be at least 2");
  require(max_iter >= 1, "max_iter must be positive");
  require(tol > 0 && std::isfinite(tol), "tol must be positive");
  require(ess_floor >= 0 && ess_floor < 1, "ess_floor must lie in [0, 1)");
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(sigma > 0 && std::isfinite(sigma), "sigma must be positive");
  require(lambda > 0 && std::isfinite(lambda), "lambda must be positive");
}

double MCEMState::weight(std::size_t block, std::size_t j) const {
  return std::exp(log_weights[block * k + j]);
}

std::vector<double> raw_log_weights(const ProposalSet& samples,
                                    Weighting weighting) {
  const std::size_t k = samples.k, n = samples.n;
  if (weighting == Weighting::joint) {
    std::vector<double> out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) out[j] += samples.record_log_density[j * n + i];
    }
    return out;
  }
  std::vector<double> out(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = samples.record_log_density[j * n + i];
  }
  return out;
}

MCEMState weigh(const ProposalSet& samples, Weighting weighting,
                const Eigen::Vector2d& theta) {
  require(samples.k >= 1 && samples.n >= 1, "empty proposal set");
  MCEMState state;
  state.theta = theta;
  state.weighting = weighting;
  state.k = samples.k;
  state.blocks = weighting == Weighting::joint ? 1 : samples.n;
  state.log_weights = raw_log_weights(samples, weighting);

  state.max_log_weight = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples.k; ++j) {
    double total = 0;
    for (std::size_t i = 0; i < samples.n; ++i) {
      total += samples.record_log_density[j * samples.n + i];
    }
    state.max_log_weight = std::max(state.max_log_weight, total);
  }

  state.ess = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < state.blocks; ++b) {
    std::span<double> block(state.log_weights.data() + b * state.k, state.k);
    const double top = *std::max_element(block.begin(), block.end());
    if (!std::isfinite(top)) {
      fail(ErrorCode::degenerate_weights, "no proposal has positive weight");
    }
    const double norm = log_sum_exp(block);
    double sum_sq = 0;
    for (double& lw : block) {
      lw -= norm;
      sum_sq += std::exp(2 * lw);
    }
    if (!(sum_sq > 0)) fail(ErrorCode::degenerate_weights, "weights underflow");
    state.ess = std::min(state.ess, 1.0 / sum_sq);
  }
  return state;
}

EStepResult e_step(const PrivatizedDataset& data, const Eigen::Vector2d& theta,
                   const MCEMConfig& config, const Stream& rng) {
  ProposalRequest req;
  req.x_tilde = data.x_tilde;
  req.y_tilde = data.y_tilde;
  req.beta0 = theta(0);
  req.beta1 = theta(1);
  req.sigma = config.sigma;
  req.lambda = config.lambda;
  req.scale_x = data.spec_x.scale();
  req.scale_y = data.spec_y.scale();
  req.k = config.k_samples;
  EStepResult out;
  out.samples = kernels::draw_proposals(req, rng);
  out.state = weigh(out.samples, config.weighting, theta);
  return out;
}

namespace {

// Weighted expectation over the proposals of a per-record quantity, summed
// over records. f(i, j) is evaluated on record i of proposal j.
template <typename F>
auto record_sum(const MCEMState& state, const ProposalSet& samples, F f) {
  using T = decltype(f(std::size_t{0}, std::size_t{0}));
  T total = f(0, 0) * 0.0;
  if (state.weighting == Weighting::joint) {
    for (std::size_t j = 0; j < samples.k; ++j) {
      const double w = state.weight(0, j);
      T inner = total * 0.0;
      for (std::size_t i = 0; i < samples.n; ++i) inner += f(i, j);
      total += w * inner;
    }
  } else {
    for (std::size_t i = 0; i < samples.n; ++i) {
      T inner = total * 0.0;
      for (std::size_t j = 0; j < samples.k; ++j) inner += state.weight(i, j) * f(i, j);
      total += inner;
    }
  }
  return total;
}

Eigen::Vector2d record_score(const ProposalSet& samples, std::size_t i,
                             std::size_t j, const Eigen::Vector2d& theta) {
  const double x = samples.x_at(j, i), y = samples.y_at(j, i);
  const double r = (y - theta(0) - theta(1) * x) / (samples.sigma * samples.sigma);
  return {r, r * x};
}

// Score of a block for proposal j: one record, or all records for joint.
Eigen::Vector2d block_score(const MCEMState& state, const ProposalSet& samples,
                            std::size_t b, std::size_t j,
                            const Eigen::Vector2d& theta) {
  if (state.weighting == Weighting::per_record) return record_score(samples, b, j, theta);
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < samples.n; ++i) s += record_score(samples, i, j, theta);
  return s;
}

}  // namespace

Eigen::Vector2d m_step(const MCEMState& state, const ProposalSet& samples) {
  const double n = static_cast<double>(samples.n);
  const Eigen::Vector4d m = record_sum(state, samples, [&](std::size_t i, std::size_t j) {
    const double x = samples.x_at(j, i), y = samples.y_at(j, i);
    return Eigen::Vector4d(x, y, x * x, x * y);
  }) / n;
  const double var_x = m(2) - m(0) * m(0);
  if (!(var_x > 0)) fail(ErrorCode::degenerate_design, "weighted variance of x is zero");
  const double b1 = (m(3) - m(0) * m(1)) / var_x;
  return {m(1) - b1 * m(0), b1};
}

Eigen::Matrix2d observed_fisher(const MCEMState& state,
                                const ProposalSet& samples,
                                const Eigen::Vector2d& theta) {
  const double s2 = samples.sigma * samples.sigma;
  const Eigen::Vector3d moments = record_sum(state, samples, [&](std::size_t i, std::size_t j) {
    const double x = samples.x_at(j, i);
    return Eigen::Vector3d(1.0, x, x * x);
  });
  Eigen::Matrix2d info;
  info << moments(0), moments(1), moments(1), moments(2);
  info /= s2;

  for (std::size_t b = 0; b < state.blocks; ++b) {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
    for (std::size_t j = 0; j < samples.k; ++j) {
      const double w = state.weight(b, j);
      const Eigen::Vector2d s = block_score(state, samples, b, j, theta);
      mean += w * s;
      outer += w * s * s.transpose();
    }
    info -= outer - mean * mean.transpose();
  }
  return info;
}

ScoreCheck weighted_score(const MCEMState& state, const ProposalSet& samples,
                          const Eigen::Vector2d& theta) {
  ScoreCheck out;
  Eigen::Vector2d var = Eigen::Vector2d::Zero();
  for (std::size_t b = 0; b < state.blocks; ++b) {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j < samples.k; ++j) {
      mean += state.weight(b, j) * block_score(state, samples, b, j, theta);
    }
    // Delta-method variance of a self-normalized estimate.
    for (std::size_t j = 0; j < samples.k; ++j) {
      const double w = state.weight(b, j);
      const Eigen::Vector2d d = block_score(state, samples, b, j, theta) - mean;
      var += (w * w) * d.cwiseProduct(d);
    }
    out.mean += mean;
  }
  out.standard_error = var.cwiseSqrt();
  return out;
}

bool Ellipse::contains(const Eigen::Vector2d& point) const {
  const Eigen::Vector2d d = point - center;
  return d.dot(shape * d) <= level;
}

double Ellipse::area() const {
  return std::numbers::pi * level / std::sqrt(shape.determinant());
}

Ellipse confidence_ellipse(const Eigen::Vector2d& theta_hat,
                           const Eigen::Matrix2d& fisher, double alpha) {
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(fisher.allFinite(), "information matrix must be finite");
  const Eigen::Matrix2d sym = 0.5 * (fisher + fisher.transpose());
  Eigen::LLT<Eigen::Matrix2d> llt(sym);
  if (llt.info() != Eigen::Success || !(sym.determinant() > 0)) {
    fail(ErrorCode::non_pd_information, "observed information is not positive definite");
  }
  Ellipse e;
  e.center = theta_hat;
  e.shape = sym;
  e.level = chi_square2_quantile(1 - alpha);
  return e;
}

MCEMResult run_mcem(const PrivatizedDataset& data, const MCEMConfig& config,
                    const Stream& rng) {
  config.validate();
  data.validate();
  MCEMConfig cfg = config;

  Eigen::Vector2d theta = ols(data.x_tilde, data.y_tilde).theta();
  const Stream iter_stream = rng.child("mcem");
  const Stream retry_stream = rng.child("mcem-retry");
  MCEMResult result;
  bool doubled = false;
  int stable = 0;

  for (std::size_t t = 0; t < cfg.max_iter; ++t) {
    EStepResult e = e_step(data, theta, cfg, iter_stream.child(t));
    if (!doubled && e.state.ess / static_cast<double>(cfg.k_samples) < cfg.ess_floor) {
      doubled = true;
      cfg.k_samples *= 2;
      e = e_step(data, theta, cfg, retry_stream.child(t));
    }
    const Eigen::Vector2d next = m_step(e.state, e.samples);
    result.trace.push_back({t + 1, next(0), next(1), e.state.ess,
                            e.state.max_log_weight, cfg.k_samples});
    const double change = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    stable = change < cfg.tol ? stable + 1 : 0;
    if (stable >= 2) {
      result.converged = true;
      break;
    }
  }

  const EStepResult final_step = e_step(data, theta, cfg, rng.child("mcem-fisher"));
  result.fisher = observed_fisher(final_step.state, final_step.samples, theta);
  result.score = weighted_score(final_step.state, final_step.samples, theta);
  result.k_samples = cfg.k_samples;

  result.fit.method = FitMethod::mcem;
  result.fit.n = data.size();
  result.fit.beta0 = theta(0);
  result.fit.beta1 = theta(1);
  result.fit.residual_variance = cfg.sigma * cfg.sigma;
  try {
    result.ellipse = confidence_ellipse(theta, result.fisher, cfg.alpha);
    result.fit.covariance = result.ellipse->shape.inverse();
  } catch (const Error& err) {
    result.ellipse_error = err.what();
    result.fit.covariance.setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  return result;
}

}  // namespace tprivacy
