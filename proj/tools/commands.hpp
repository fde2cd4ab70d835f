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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "io.hpp"

namespace tprivacy::cli {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string output = "-";
  std::string format = "csv";
  int threads = 0;
};

struct Context {
  const Globals& globals;
  const Meta& meta;

  bool json() const { return globals.format == "json"; }
  // Throws a usage error when the command is stochastic and no seed was given.
  std::uint64_t seed() const;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<std::string(const Context&)> run;
};

std::vector<Command> add_commands(CLI::App& root);

}  // namespace tprivacy::cli
