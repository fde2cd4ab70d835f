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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tprivacy/random.hpp"

namespace tprivacy {

// The privacy loss budget. Always strictly positive and finite.
class PrivacyBudget {
 public:
  explicit PrivacyBudget(double epsilon);

  double epsilon() const noexcept { return epsilon_; }

  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;

 private:
  double epsilon_;
};

enum class Family { laplace, double_geometric, randomized_response };

std::string_view family_name(Family family);
// Accepts "laplace", "double-geometric", "randomized-response" (underscores
// are tolerated too).
Family parse_family(std::string_view name);

// Public description of a mechanism: everything an analyst needs in order to
// write down p(released | confidential). Scale is derived, never stored.
struct MechanismSpec {
  Family family = Family::laplace;
  double sensitivity = 1.0;
  PrivacyBudget budget{1.0};

  static MechanismSpec make(Family family, double sensitivity, double epsilon);

  bool additive() const noexcept {
    return family != Family::randomized_response;
  }
  // Delta / epsilon for the additive families.
  double scale() const noexcept { return sensitivity / budget.epsilon(); }
  // Variance of one additive noise draw.
  double noise_variance() const;
  // e^eps / (1 + e^eps), the probability randomized response tells the truth.
  double truth_probability() const noexcept;

  friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

// Realized noise. Kept for test oracles; never part of a public release.
struct NoiseRecord {
  std::vector<double> draws;
  Family family = Family::laplace;
  double scale = 0;
};

// I.i.d. zero-mean Laplace(scale) draws, by inverse-CDF of one uniform each.
std::vector<double> laplace_noise(Stream& rng, double scale, std::size_t count);
double laplace_draw(Stream& rng, double scale);

// log of (1 / 2b) exp(-|u| / b).
double laplace_log_density(double u, double scale);

// Integer noise with pmf proportional to exp(-eps |u| / sensitivity),
// drawn as the difference of two i.i.d. geometric variables.
std::int64_t double_geometric_noise(Stream& rng, PrivacyBudget budget,
                                    double sensitivity = 1.0);
double double_geometric_log_pmf(std::int64_t u, PrivacyBudget budget,
                                double sensitivity = 1.0);

int randomized_response(Stream& rng, int truth, PrivacyBudget budget);
double randomized_response_log_pmf(int output, int truth, PrivacyBudget budget);

struct Release {
  std::vector<double> values;
  NoiseRecord noise;
};

Release privatize_vector(std::span<const double> values,
                         const MechanismSpec& spec, Stream& rng);

// Basic sequential composition: the epsilons add.
PrivacyBudget compose(std::span<const PrivacyBudget> budgets);

struct DpReport {
  double max_log_ratio = 0;
  bool satisfied = false;
};

// Brute-force check of the epsilon-DP inequality for a discrete mechanism
// running at `mechanism` on neighbouring inputs (counts c and c + 1, or truth
// bits 0 and 1). The ratio is compared against `claimed`, which defaults to
// the mechanism's own budget.
DpReport verify_dp_discrete(Family family, PrivacyBudget mechanism,
                            std::int64_t support_bound,
                            std::optional<PrivacyBudget> claimed = std::nullopt);

}  // namespace tprivacy
