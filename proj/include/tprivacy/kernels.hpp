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

// Data-parallel inner loops. Each kernel in tprivacy::kernels is an OpenMP
// implementation; the function of the same name in tprivacy::reference is the
// plain serial loop it must agree with bit for bit. Work item j always draws
// from rng.child(j) and results are assembled by index, so output does not
// depend on the thread count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tprivacy/asymptotics.hpp"
#include "tprivacy/bayes_abc.hpp"
#include "tprivacy/mcem.hpp"
#include "tprivacy/metrics.hpp"
#include "tprivacy/random.hpp"

namespace tprivacy {

struct ProposalRequest {
  std::span<const double> x_tilde;
  std::span<const double> y_tilde;
  double beta0 = 0;
  double beta1 = 0;
  double sigma = 1;
  double lambda = 1;
  double scale_x = 1;  // Laplace scales of the release
  double scale_y = 1;
  std::size_t k = 1;
};

struct AbcBatchRequest {
  std::span<const double> x_tilde;
  std::span<const double> y_tilde;
  double scale_x = 1;
  double scale_y = 1;
  PriorSpec prior;
  AbcModel model;
};

struct AbcBatch {
  std::vector<std::uint8_t> accepted;
  std::vector<Eigen::Vector2d> beta;
};

void set_num_threads(int threads);
int max_threads();

namespace kernels {

ProposalSet draw_proposals(const ProposalRequest& request, const Stream& rng);

std::vector<double> fixed_design_slopes(std::span<const double> x,
                                        const FixedDesignNoise& model,
                                        std::size_t replicates,
                                        const Stream& rng);

AbcBatch abc_batch(const AbcBatchRequest& request, std::uint64_t first,
                   std::size_t count, const Stream& rng);

// Grid index of each accepted proposal, -1 for rejections.
std::vector<std::int32_t> toy_abc_batch(const DiscreteToy& toy,
                                        const ToyData& s_tilde,
                                        std::uint64_t first, std::size_t count,
                                        const Stream& rng);

// NaN marks replicates where a privatized total was not positive.
std::vector<double> dissimilarity_replicates(const CountyTable& table,
                                             PrivacyBudget eps,
                                             std::size_t replicates,
                                             const Stream& rng);

}  // namespace kernels

namespace reference {

ProposalSet draw_proposals(const ProposalRequest& request, const Stream& rng);

std::vector<double> fixed_design_slopes(std::span<const double> x,
                                        const FixedDesignNoise& model,
                                        std::size_t replicates,
                                        const Stream& rng);

AbcBatch abc_batch(const AbcBatchRequest& request, std::uint64_t first,
                   std::size_t count, const Stream& rng);

std::vector<std::int32_t> toy_abc_batch(const DiscreteToy& toy,
                                        const ToyData& s_tilde,
                                        std::uint64_t first, std::size_t count,
                                        const Stream& rng);

std::vector<double> dissimilarity_replicates(const CountyTable& table,
                                             PrivacyBudget eps,
                                             std::size_t replicates,
                                             const Stream& rng);

}  // namespace reference
}  // namespace tprivacy
