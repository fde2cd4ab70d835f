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
#include <vector>

#include "tprivacy/mechanisms.hpp"
#include "tprivacy/random.hpp"

namespace tprivacy {

// y = beta0 + beta1 x + e, e ~ N(0, sigma^2), x ~ Poisson(lambda).
struct RegressionParams {
  double beta0 = -5;
  double beta1 = 4;
  double sigma = 5;
  double lambda = 10;

  void validate() const;
};

struct ConfidentialDataset {
  std::vector<std::int64_t> x;
  std::vector<double> y;
  RegressionParams params;
  std::uint64_t seed = 0;  // key of the stream that generated the data

  std::size_t size() const noexcept { return x.size(); }
  std::vector<double> x_real() const;
};

struct PrivatizedDataset {
  std::vector<double> x_tilde;
  std::vector<double> y_tilde;
  MechanismSpec spec_x;
  MechanismSpec spec_y;
  std::uint64_t parent_seed = 0;

  std::size_t size() const noexcept { return x_tilde.size(); }
  void validate() const;
  double sigma_u_sq() const { return spec_x.noise_variance(); }
  double sigma_v_sq() const { return spec_y.noise_variance(); }
};

// A release together with the noise that produced it. Test-side only.
struct TracedRelease {
  PrivatizedDataset release;
  NoiseRecord noise_x;
  NoiseRecord noise_y;
};

ConfidentialDataset gen_confidential(std::size_t n, const RegressionParams& params,
                                     Stream& rng);

// Per-coordinate Laplace(1 / eps) noise on x and y (unit sensitivity).
PrivatizedDataset privatize_dataset(const ConfidentialDataset& data,
                                    PrivacyBudget eps_x, PrivacyBudget eps_y,
                                    Stream& rng);
TracedRelease privatize_dataset_traced(const ConfidentialDataset& data,
                                       PrivacyBudget eps_x, PrivacyBudget eps_y,
                                       Stream& rng);

}  // namespace tprivacy
