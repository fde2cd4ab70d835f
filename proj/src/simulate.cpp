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

#include "tprivacy/simulate.hpp"

#include <cmath>
#include <random>

#include "tprivacy/error.hpp"

namespace tprivacy {

void RegressionParams::validate() const {
  require(std::isfinite(beta0) && std::isfinite(beta1), "betas must be finite");
  require(std::isfinite(sigma) && sigma > 0, "sigma must be positive");
  require(std::isfinite(lambda) && lambda > 0, "lambda must be positive");
}

std::vector<double> ConfidentialDataset::x_real() const {
  return {x.begin(), x.end()};
}

void PrivatizedDataset::validate() const {
  require(x_tilde.size() == y_tilde.size(),
          "privatized x and y must have equal lengths");
  require(x_tilde.size() >= 3, "need at least three observations");
  require(spec_x.additive() && spec_y.additive(),
          "regression releases use additive mechanisms");
}

ConfidentialDataset gen_confidential(std::size_t n, const RegressionParams& params,
                                     Stream& rng) {
  require(n >= 3, "gen_confidential: regression needs n >= 3");
  params.validate();
  ConfidentialDataset data;
  data.params = params;
  data.seed = rng.key();
  data.x.resize(n);
  data.y.resize(n);
  std::poisson_distribution<std::int64_t> pois(params.lambda);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    data.x[i] = pois(rng);
    data.y[i] = params.beta0 + params.beta1 * static_cast<double>(data.x[i]) +
                params.sigma * normal(rng);
  }
  return data;
}

TracedRelease privatize_dataset_traced(const ConfidentialDataset& data,
                                       PrivacyBudget eps_x, PrivacyBudget eps_y,
                                       Stream& rng) {
  require(data.x.size() == data.y.size(), "x and y must have equal lengths");
  TracedRelease out;
  out.release.spec_x = MechanismSpec{Family::laplace, 1.0, eps_x};
  out.release.spec_y = MechanismSpec{Family::laplace, 1.0, eps_y};
  out.release.parent_seed = data.seed;

  Stream x_stream = rng.child("privatize-x");
  Stream y_stream = rng.child("privatize-y");
  const std::vector<double> x = data.x_real();
  Release rx = privatize_vector(x, out.release.spec_x, x_stream);
  Release ry = privatize_vector(data.y, out.release.spec_y, y_stream);
  out.release.x_tilde = std::move(rx.values);
  out.release.y_tilde = std::move(ry.values);
  out.noise_x = std::move(rx.noise);
  out.noise_y = std::move(ry.noise);
  return out;
}

PrivatizedDataset privatize_dataset(const ConfidentialDataset& data,
                                    PrivacyBudget eps_x, PrivacyBudget eps_y,
                                    Stream& rng) {
  return privatize_dataset_traced(data, eps_x, eps_y, rng).release;
}

}  // namespace tprivacy
