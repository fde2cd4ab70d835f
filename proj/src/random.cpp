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

#include "tprivacy/random.hpp"

namespace tprivacy {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t hash_label(std::string_view label) noexcept {
  // FNV-1a, then mixed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed) noexcept : key_(mix64(seed + kGamma)) {}

Stream Stream::child(std::string_view label) const noexcept {
  return Stream(mix64(key_ ^ hash_label(label)) + kGamma, true);
}

Stream Stream::child(std::uint64_t index) const noexcept {
  return Stream(mix64(mix64(key_ + 0x632be59bd9b4e019ULL) ^ mix64(index + kGamma)),
                true);
}

Stream::result_type Stream::operator()() noexcept {
  return mix64(key_ + (++counter_) * kGamma);
}

double Stream::uniform() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tprivacy
