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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "internal/toy_sampler.hpp"
#include "tprivacy/distributions.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"

namespace tprivacy {

PriorSpec PriorSpec::box(double lo0, double hi0, double lo1, double hi1) {
  PriorSpec p{Kind::uniform_box, lo0, hi0, lo1, hi1};
  p.validate();
  return p;
}

PriorSpec PriorSpec::normal(double mean0, double sd0, double mean1, double sd1) {
  PriorSpec p{Kind::independent_normal, mean0, sd0, mean1, sd1};
  p.validate();
  return p;
}

void PriorSpec::validate() const {
  require(std::isfinite(lo0) && std::isfinite(hi0) && std::isfinite(lo1) &&
              std::isfinite(hi1),
          "prior parameters must be finite");
  if (kind == Kind::uniform_box) {
    require(lo0 <= hi0 && lo1 <= hi1, "prior box bounds are reversed");
  } else {
    require(hi0 > 0 && hi1 > 0, "prior standard deviations must be positive");
  }
}

Eigen::Vector2d PriorSpec::sample(Stream& rng) const {
  const double u0 = rng.uniform();
  const double u1 = rng.uniform();
  if (kind == Kind::uniform_box) {
    return {lo0 + (hi0 - lo0) * u0, lo1 + (hi1 - lo1) * u1};
  }
  return {lo0 + hi0 * normal_quantile(u0), lo1 + hi1 * normal_quantile(u1)};
}

double abc_log_acceptance(std::span<const double> x_tilde,
                          std::span<const double> y_tilde, double scale_x,
                          double scale_y, std::span<const double> x,
                          std::span<const double> y) {
  require(x_tilde.size() == x.size() && y_tilde.size() == y.size() &&
              x.size() == y.size(),
          "abc_log_acceptance: length mismatch");
  double log_acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_acc += -std::abs(x_tilde[i] - x[i]) / scale_x -
               std::abs(y_tilde[i] - y[i]) / scale_y;
  }
  return log_acc;
}

namespace {

void check_budget(std::size_t accepted, std::size_t proposals,
                  const AbcOptions& options) {
  if (options.max_proposals > 0 && proposals >= options.max_proposals) {
    fail(ErrorCode::infeasible_abc,
         "proposal cap reached with " + std::to_string(accepted) + " acceptances");
  }
  if (proposals >= options.probe &&
      static_cast<double>(accepted) < options.min_rate * static_cast<double>(proposals)) {
    fail(ErrorCode::infeasible_abc, "acceptance rate below " +
                                        std::to_string(options.min_rate) + " after " +
                                        std::to_string(proposals) + " proposals");
  }
}

}  // namespace

AbcResult abc_exact_posterior(const PrivatizedDataset& data, const PriorSpec& prior,
                              const AbcModel& model, std::size_t draws,
                              const Stream& rng, const AbcOptions& options) {
  data.validate();
  prior.validate();
  require(data.spec_x.family == Family::laplace && data.spec_y.family == Family::laplace,
          "abc: continuous instance expects Laplace releases");
  require(model.sigma > 0 && model.lambda > 0, "abc: sigma and lambda must be positive");
  require(draws >= 1, "abc: need at least one draw");
  require(options.batch >= 1, "abc: batch must be positive");

  AbcBatchRequest req{data.x_tilde, data.y_tilde, data.spec_x.scale(),
                      data.spec_y.scale(), prior, model};
  AbcResult out;
  std::uint64_t next = 0;
  while (out.draws.size() < draws) {
    const AbcBatch batch = kernels::abc_batch(req, next, options.batch, rng);
    for (std::size_t j = 0; j < options.batch && out.draws.size() < draws; ++j) {
      ++out.proposals;
      if (batch.accepted[j]) out.draws.push_back(batch.beta[j]);
    }
    next += options.batch;
    if (out.draws.size() < draws) check_budget(out.draws.size(), out.proposals, options);
  }
  out.acceptance_rate =
      static_cast<double>(out.draws.size()) / static_cast<double>(out.proposals);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxToyStates = 5'000'000;

double log_normalizer(const std::vector<double>& log_mass) {
  return log_sum_exp(log_mass);
}

}  // namespace

void DiscreteToy::validate() const {
  require(!beta_grid.empty(), "toy: empty beta grid");
  require(prior.size() == beta_grid.size(), "toy: prior and grid sizes differ");
  double total = 0;
  for (double p : prior) {
    require(p >= 0 && std::isfinite(p), "toy: prior masses must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1) < 1e-9, "toy: prior must sum to one");
  require(x_min >= 0 && x_min <= x_max, "toy: bad x support");
  require(y_min <= y_max, "toy: bad y support");
  require(x_lambda > 0 && sigma > 0, "toy: lambda and sigma must be positive");
  require(n >= 1, "toy: need at least one record");
  require(mechanism.family == Family::double_geometric,
          "toy: mechanism must be double geometric");
  require(state_count() <= kMaxToyStates, "toy: too many confidential states");
}

std::size_t DiscreteToy::state_count() const {
  const double per = static_cast<double>(x_count() * y_count());
  const double total = std::pow(per, static_cast<double>(n));
  if (total > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= x_count() * y_count();
  return out;
}

double DiscreteToy::log_px(std::int64_t x) const {
  if (x < x_min || x > x_max) return -std::numeric_limits<double>::infinity();
  auto lp = [&](std::int64_t k) {
    const double kd = static_cast<double>(k);
    return kd * std::log(x_lambda) - x_lambda - std::lgamma(kd + 1);
  };
  std::vector<double> all;
  for (std::int64_t k = x_min; k <= x_max; ++k) all.push_back(lp(k));
  return lp(x) - log_normalizer(all);
}

double DiscreteToy::log_py(std::int64_t y, std::int64_t x,
                           const Eigen::Vector2d& beta) const {
  if (y < y_min || y > y_max) return -std::numeric_limits<double>::infinity();
  const double mu = beta(0) + beta(1) * static_cast<double>(x);
  auto lk = [&](std::int64_t k) {
    const double z = (static_cast<double>(k) - mu) / sigma;
    return -0.5 * z * z;
  };
  std::vector<double> all;
  for (std::int64_t k = y_min; k <= y_max; ++k) all.push_back(lk(k));
  return lk(y) - log_normalizer(all);
}

double DiscreteToy::log_likelihood(const ToyData& s, const Eigen::Vector2d& beta) const {
  require(s.x.size() == n && s.y.size() == n, "toy: dataset size mismatch");
  double out = 0;
  for (std::size_t i = 0; i < n; ++i) out += log_px(s.x[i]) + log_py(s.y[i], s.x[i], beta);
  return out;
}

double DiscreteToy::log_mechanism(const ToyData& s_tilde, const ToyData& s,
                                  std::optional<PrivacyBudget> budget) const {
  require(s_tilde.x.size() == n && s_tilde.y.size() == n, "toy: release size mismatch");
  require(s.x.size() == n && s.y.size() == n, "toy: dataset size mismatch");
  const PrivacyBudget eps = budget.value_or(mechanism.budget);
  double out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out += double_geometric_log_pmf(s_tilde.x[i] - s.x[i], eps, mechanism.sensitivity) +
           double_geometric_log_pmf(s_tilde.y[i] - s.y[i], eps, mechanism.sensitivity);
  }
  return out;
}

DiscreteToy DiscreteToy::with_budget(PrivacyBudget budget) const {
  DiscreteToy out = *this;
  out.mechanism.budget = budget;
  return out;
}

ToyData DiscreteToy::sample_confidential(const Eigen::Vector2d& beta, Stream& rng) const {
  auto draw = [&](const std::vector<double>& log_mass) {
    const double u = rng.uniform();
    double acc = 0;
    for (std::size_t k = 0; k < log_mass.size(); ++k) {
      acc += std::exp(log_mass[k]);
      if (u < acc) return k;
    }
    return log_mass.size() - 1;
  };
  std::vector<double> lx;
  for (std::int64_t x = x_min; x <= x_max; ++x) lx.push_back(log_px(x));
  ToyData s;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t x = x_min + static_cast<std::int64_t>(draw(lx));
    std::vector<double> ly;
    for (std::int64_t y = y_min; y <= y_max; ++y) ly.push_back(log_py(y, x, beta));
    s.x.push_back(x);
    s.y.push_back(y_min + static_cast<std::int64_t>(draw(ly)));
  }
  return s;
}

ToyData DiscreteToy::privatize(const ToyData& s, Stream& rng) const {
  ToyData out;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out.x.push_back(s.x[i] + double_geometric_noise(rng, mechanism.budget, mechanism.sensitivity));
    out.y.push_back(s.y[i] + double_geometric_noise(rng, mechanism.budget, mechanism.sensitivity));
  }
  return out;
}

DiscreteToy random_toy(Stream& rng) {
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
  };
  DiscreteToy toy;
  const auto grid = static_cast<std::size_t>(pick(2, 5));
  double total = 0;
  for (std::size_t g = 0; g < grid; ++g) {
    toy.beta_grid.emplace_back(between(-1, 2), between(-1, 2));
    toy.prior.push_back(between(0.1, 1));
    total += toy.prior.back();
  }
  for (double& p : toy.prior) p /= total;
  toy.x_min = pick(0, 1);
  toy.x_max = toy.x_min + pick(1, 2);
  toy.x_lambda = between(0.5, 3);
  toy.y_min = pick(-1, 0);
  toy.y_max = toy.y_min + pick(2, 3);
  toy.sigma = between(0.5, 2);
  toy.n = static_cast<std::size_t>(pick(1, 3));
  toy.mechanism = MechanismSpec{Family::double_geometric, 1.0,
                                PrivacyBudget(between(0.3, 2))};
  return toy;
}

ToyData toy_state(const DiscreteToy& toy, std::size_t index) {
  const std::size_t nx = toy.x_count(), ny = toy.y_count(), per = nx * ny;
  ToyData s;
  for (std::size_t i = 0; i < toy.n; ++i) {
    const std::size_t d = index % per;
    index /= per;
    s.x.push_back(toy.x_min + static_cast<std::int64_t>(d / ny));
    s.y.push_back(toy.y_min + static_cast<std::int64_t>(d % ny));
  }
  return s;
}

namespace {

std::vector<double> normalize_log(std::vector<double> log_mass) {
  const double norm = log_sum_exp(log_mass);
  if (!std::isfinite(norm)) {
    fail(ErrorCode::invalid_argument, "toy: release has zero probability under the model");
  }
  for (double& v : log_mass) v = std::exp(v - norm);
  return log_mass;
}

}  // namespace

std::vector<double> grid_posterior_oracle(const DiscreteToy& toy,
                                          const ToyData& s_tilde) {
  toy.validate();
  const std::size_t states = toy.state_count();
  std::vector<double> log_post(toy.beta_grid.size());
  std::vector<double> terms(states);
  for (std::size_t b = 0; b < toy.beta_grid.size(); ++b) {
    for (std::size_t idx = 0; idx < states; ++idx) {
      const ToyData s = toy_state(toy, idx);
      terms[idx] = toy.log_mechanism(s_tilde, s) + toy.log_likelihood(s, toy.beta_grid[b]);
    }
    log_post[b] = std::log(toy.prior[b]) + log_sum_exp(terms);
  }
  return normalize_log(std::move(log_post));
}

MixtureOracle mixture_posterior_oracle(const DiscreteToy& toy,
                                       const ToyData& s_tilde) {
  toy.validate();
  const std::size_t states = toy.state_count();
  const std::size_t grid = toy.beta_grid.size();
  MixtureOracle out;
  out.posterior.assign(grid, 0.0);

  std::vector<double> log_pred(states);
  std::vector<std::vector<double>> conditional(states);
  std::vector<double> joint(grid);
  for (std::size_t idx = 0; idx < states; ++idx) {
    const ToyData s = toy_state(toy, idx);
    for (std::size_t b = 0; b < grid; ++b) {
      joint[b] = std::log(toy.prior[b]) + toy.log_likelihood(s, toy.beta_grid[b]);
    }
    const double log_marginal = log_sum_exp(joint);
    log_pred[idx] = toy.log_mechanism(s_tilde, s) + log_marginal;
    std::vector<double>& post = conditional[idx];
    post.resize(grid);
    for (std::size_t b = 0; b < grid; ++b) post[b] = std::exp(joint[b] - log_marginal);
  }
  out.predictive = normalize_log(std::move(log_pred));
  for (std::size_t idx = 0; idx < states; ++idx) {
    for (std::size_t b = 0; b < grid; ++b) {
      out.posterior[b] += out.predictive[idx] * conditional[idx][b];
    }
  }
  return out;
}

namespace {

Eigen::Vector2d grid_mean(const DiscreteToy& toy, const std::vector<double>& post) {
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (std::size_t b = 0; b < post.size(); ++b) m += post[b] * toy.beta_grid[b];
  return m;
}

}  // namespace

MisreportReport misreported_mechanism_bias(const DiscreteToy& toy,
                                           const ToyData& s_tilde,
                                           PrivacyBudget true_eps,
                                           std::optional<PrivacyBudget> assumed_eps) {
  const DiscreteToy truth = toy.with_budget(true_eps);
  MisreportReport out;
  out.true_mean = grid_mean(truth, grid_posterior_oracle(truth, s_tilde));
  if (assumed_eps) {
    const DiscreteToy assumed = toy.with_budget(*assumed_eps);
    out.assumed_mean = grid_mean(assumed, grid_posterior_oracle(assumed, s_tilde));
  } else {
    // Treating the release as confidential data.
    std::vector<double> log_post(toy.beta_grid.size());
    for (std::size_t b = 0; b < log_post.size(); ++b) {
      log_post[b] = std::log(toy.prior[b]) + toy.log_likelihood(s_tilde, toy.beta_grid[b]);
    }
    out.assumed_mean = grid_mean(toy, normalize_log(std::move(log_post)));
  }
  out.discrepancy = out.assumed_mean - out.true_mean;
  return out;
}

std::vector<double> ToyAbcResult::histogram() const {
  std::vector<double> h(counts.size(), 0.0);
  if (accepted == 0) return h;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    h[b] = static_cast<double>(counts[b]) / static_cast<double>(accepted);
  }
  return h;
}

ToyAbcResult abc_toy_posterior(const DiscreteToy& toy, const ToyData& s_tilde,
                               std::size_t draws, const Stream& rng,
                               const AbcOptions& options) {
  toy.validate();
  require(s_tilde.x.size() == toy.n && s_tilde.y.size() == toy.n,
          "toy: release size mismatch");
  require(draws >= 1 && options.batch >= 1, "abc: draws and batch must be positive");
  ToyAbcResult out;
  out.counts.assign(toy.beta_grid.size(), 0);
  std::uint64_t next = 0;
  while (out.accepted < draws) {
    const auto batch = kernels::toy_abc_batch(toy, s_tilde, next, options.batch, rng);
    for (std::size_t j = 0; j < batch.size() && out.accepted < draws; ++j) {
      ++out.proposals;
      if (batch[j] >= 0) {
        ++out.counts[static_cast<std::size_t>(batch[j])];
        ++out.accepted;
      }
    }
    next += options.batch;
    if (out.accepted < draws) check_budget(out.accepted, out.proposals, options);
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), "total_variation: size mismatch");
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

}  // namespace tprivacy
