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

#include <cstdint>
#include <limits>
#include <string_view>

namespace tprivacy {

// Counter-based random stream.
//
// A stream is a 64-bit key plus a counter; draw j is a SplitMix64 finalizer
// applied to key + j * golden-gamma. Child streams are derived by mixing the
// parent key with a label or an index, so every logical consumer (a dataset,
// a replicate, an MCEM iteration, a proposal) owns an independent sequence
// regardless of how work is scheduled across threads.
//
// Satisfies UniformRandomBitGenerator, so it plugs into <random>
// distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) noexcept;

  Stream child(std::string_view label) const noexcept;
  Stream child(std::uint64_t index) const noexcept;

  result_type operator()() noexcept;

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  Stream(std::uint64_t key, bool /*raw*/) noexcept : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace tprivacy
