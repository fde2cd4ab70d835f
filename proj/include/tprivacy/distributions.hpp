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

#include <span>

namespace tprivacy {

// Standard normal CDF, computed through erfc so the upper tail keeps full
// relative precision.
double normal_cdf(double z);

// Standard normal quantile. Acklam's rational approximation (relative error
// below 1.15e-9) followed by one Halley step against normal_cdf, which brings
// the absolute error to a few ulps over (1e-300, 1 - 1e-16).
double normal_quantile(double p);

// Upper quantile of the chi-square distribution with two degrees of freedom:
// the value c with P(X <= c) = prob. Closed form -2 log(1 - prob).
double chi_square2_quantile(double prob);

// log(sum(exp(values))) via max-subtraction. Returns -inf for an empty span.
double log_sum_exp(std::span<const double> values);

}  // namespace tprivacy
