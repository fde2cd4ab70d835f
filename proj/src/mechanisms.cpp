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

#include "tprivacy/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tprivacy/error.hpp"

namespace tprivacy {

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0,
          "privacy budget must be positive and finite, got " +
              std::to_string(epsilon));
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::laplace:
      return "laplace";
    case Family::double_geometric:
      return "double-geometric";
    case Family::randomized_response:
      return "randomized-response";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '-');
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "laplace") return Family::laplace;
  if (s == "double-geometric" || s == "geometric") return Family::double_geometric;
  if (s == "randomized-response") return Family::randomized_response;
  fail(ErrorCode::invalid_argument, "unknown mechanism family '" + s + "'");
}

MechanismSpec MechanismSpec::make(Family family, double sensitivity,
                                  double epsilon) {
  require(std::isfinite(sensitivity) && sensitivity > 0,
          "sensitivity must be positive and finite");
  return MechanismSpec{family, sensitivity, PrivacyBudget(epsilon)};
}

double MechanismSpec::noise_variance() const {
  switch (family) {
    case Family::laplace:
      return 2 * scale() * scale();
    case Family::double_geometric: {
      const double alpha = std::exp(-1 / scale());
      const double one_minus = -std::expm1(-1 / scale());
      return 2 * alpha / (one_minus * one_minus);
    }
    case Family::randomized_response:
      break;
  }
  fail(ErrorCode::unsupported, "randomized response has no additive noise");
}

double MechanismSpec::truth_probability() const noexcept {
  return 1 / (1 + std::exp(-budget.epsilon()));
}

double laplace_draw(Stream& rng, double scale) {
  const double centered = rng.uniform() - 0.5;
  // |centered| < 1/2 strictly, so the log argument stays in (0, 1].
  const double magnitude = -scale * std::log1p(-2 * std::abs(centered));
  return centered < 0 ? -magnitude : magnitude;
}

std::vector<double> laplace_noise(Stream& rng, double scale, std::size_t count) {
  require(scale > 0 && std::isfinite(scale), "laplace scale must be positive");
  require(count >= 1, "laplace_noise: count must be at least 1");
  std::vector<double> out(count);
  for (double& v : out) v = laplace_draw(rng, scale);
  return out;
}

double laplace_log_density(double u, double scale) {
  require(scale > 0, "laplace scale must be positive");
  return -std::log(2 * scale) - std::abs(u) / scale;
}

namespace {

// Number of failures before the first success when P(G >= k) = exp(-rate k).
std::int64_t geometric_draw(Stream& rng, double rate) {
  const double g = std::floor(-std::log(rng.uniform()) / rate);
  constexpr double kCap = 9.0e18;
  return static_cast<std::int64_t>(std::min(g, kCap));
}

}  // namespace

std::int64_t double_geometric_noise(Stream& rng, PrivacyBudget budget,
                                    double sensitivity) {
  require(sensitivity > 0, "sensitivity must be positive");
  const double rate = budget.epsilon() / sensitivity;
  const std::int64_t a = geometric_draw(rng, rate);
  const std::int64_t b = geometric_draw(rng, rate);
  return a - b;
}

double double_geometric_log_pmf(std::int64_t u, PrivacyBudget budget,
                                double sensitivity) {
  require(sensitivity > 0, "sensitivity must be positive");
  const double rate = budget.epsilon() / sensitivity;
  // (1 - a) / (1 + a) with a = exp(-rate).
  const double log_norm = std::log(-std::expm1(-rate)) - std::log1p(std::exp(-rate));
  return log_norm - rate * std::abs(static_cast<double>(u));
}

int randomized_response(Stream& rng, int truth, PrivacyBudget budget) {
  require(truth == 0 || truth == 1, "randomized response needs a 0/1 input");
  const double p = 1 / (1 + std::exp(-budget.epsilon()));
  return rng.uniform() < p ? truth : 1 - truth;
}

double randomized_response_log_pmf(int output, int truth, PrivacyBudget budget) {
  require((truth == 0 || truth == 1) && (output == 0 || output == 1),
          "randomized response is defined on bits");
  const double eps = budget.epsilon();
  // Writing log p as log(1 - p) + eps keeps the enumerated log ratio at eps
  // to the last bit.
  const double log_lie = -eps - std::log1p(std::exp(-eps));
  return output == truth ? log_lie + eps : log_lie;
}

Release privatize_vector(std::span<const double> values,
                         const MechanismSpec& spec, Stream& rng) {
  Release out;
  out.values.reserve(values.size());
  out.noise.family = spec.family;
  out.noise.scale = spec.scale();
  out.noise.draws.reserve(values.size());
  for (double v : values) {
    require(std::isfinite(v), "privatize_vector: values must be finite");
    double noise = 0;
    switch (spec.family) {
      case Family::laplace:
        noise = laplace_draw(rng, spec.scale());
        out.values.push_back(v + noise);
        break;
      case Family::double_geometric:
        noise = static_cast<double>(
            double_geometric_noise(rng, spec.budget, spec.sensitivity));
        out.values.push_back(v + noise);
        break;
      case Family::randomized_response: {
        require(v == 0.0 || v == 1.0,
                "randomized response applies to binary values only");
        const int bit = static_cast<int>(v);
        const int released = randomized_response(rng, bit, spec.budget);
        noise = released != bit ? 1.0 : 0.0;
        out.values.push_back(released);
        break;
      }
    }
    out.noise.draws.push_back(noise);
  }
  return out;
}

PrivacyBudget compose(std::span<const PrivacyBudget> budgets) {
  require(!budgets.empty(), "compose needs at least one budget");
  double total = 0;
  for (const PrivacyBudget& b : budgets) total += b.epsilon();
  return PrivacyBudget(total);
}

DpReport verify_dp_discrete(Family family, PrivacyBudget mechanism,
                            std::int64_t support_bound,
                            std::optional<PrivacyBudget> claimed) {
  DpReport report;
  switch (family) {
    case Family::laplace:
      fail(ErrorCode::unsupported,
           "verify_dp_discrete enumerates discrete outputs; the Laplace "
           "density ratio is bounded analytically");
    case Family::double_geometric:
      require(support_bound >= 1, "support bound must be at least 1");
      // Neighbouring counts 0 and 1: output o has noise o under one and o - 1
      // under the other.
      for (std::int64_t o = -support_bound; o <= support_bound; ++o) {
        const double r = std::abs(double_geometric_log_pmf(o, mechanism) -
                                  double_geometric_log_pmf(o - 1, mechanism));
        report.max_log_ratio = std::max(report.max_log_ratio, r);
      }
      break;
    case Family::randomized_response:
      for (int o = 0; o <= 1; ++o) {
        const double r = std::abs(randomized_response_log_pmf(o, 1, mechanism) -
                                  randomized_response_log_pmf(o, 0, mechanism));
        report.max_log_ratio = std::max(report.max_log_ratio, r);
      }
      break;
  }
  const double bound = claimed.value_or(mechanism).epsilon();
  report.satisfied = report.max_log_ratio <= bound + 1e-10;
  return report;
}

}  // namespace tprivacy
