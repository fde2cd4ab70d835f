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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "io.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/kernels.hpp"

namespace tprivacy::cli {

namespace {

const std::set<std::string> kGlobalKeys{"seed", "output", "format", "threads"};

// Reads a flat JSON object. Global keys go to the top-level app; any other
// key belongs to the active subcommand. An object under a subcommand's name
// is read as that subcommand's section.
class JsonConfig : public CLI::Config {
 public:
  JsonConfig(std::string active, std::set<std::string> subcommands)
      : active_(std::move(active)), subcommands_(std::move(subcommands)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json doc;
    try {
      doc = Json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        if (!subcommands_.count(key)) {
          throw CLI::ConfigError("config section '" + key + "' is not a subcommand");
        }
        for (const auto& [inner, v] : value.items()) items.push_back(item({key}, inner, v));
      } else if (kGlobalKeys.count(normalize(key))) {
        items.push_back(item({}, key, value));
      } else {
        items.push_back(item({active_}, key, value));
      }
    }
    return items;
  }

 private:
  static std::string normalize(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
  }

  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config values must be scalars or arrays of scalars");
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& key,
                              const Json& value) {
    CLI::ConfigItem out;
    out.parents = std::move(parents);
    out.name = normalize(key);
    if (value.is_array()) {
      for (const auto& v : value) out.inputs.push_back(scalar(v));
    } else {
      out.inputs.push_back(scalar(value));
    }
    return out;
  }

  std::string active_;
  std::set<std::string> subcommands_;
};

std::vector<std::string> echo(const CLI::Option* opt) {
  if (opt->count() > 0) return opt->results();
  const std::string def = opt->get_default_str();
  return {def.empty() ? "none" : def};
}

Meta collect_meta(const CLI::App& root, const CLI::App& sub, const Globals& g) {
  static const std::set<std::string> skip{"help", "help-all", "version", "config",
                                          "output", "threads", "seed"};
  Meta meta;
  meta.command = sub.get_name();
  meta.seed = g.seed;
  auto add = [&](const CLI::App& app) {
    for (const CLI::Option* opt : app.get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string bare = opt->get_lnames().front();
      if (skip.count(bare)) continue;
      meta.params.emplace_back(bare, echo(opt));
    }
  };
  add(root);
  add(sub);
  return meta;
}

// Returns the first argument naming a subcommand, so the config reader
// knows where flat keys belong before parsing starts.
std::string find_active(const std::vector<std::string>& args,
                        const std::set<std::string>& names) {
  for (const auto& a : args) {
    if (names.count(a)) return a;
  }
  return {};
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transparent differential privacy: mechanisms and inference on privatized "
               "regression data",
               "tprivacy"};
  app.option_defaults()->always_capture_default();
  app.set_help_all_flag("--help-all", "Print help for every subcommand");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed of the root random stream");
  app.add_option("--output", g.output, "Output path, '-' for standard output");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "OpenMP threads, 0 for the runtime default")
      ->check(CLI::NonNegativeNumber);

  auto commands = add_commands(app);
  std::set<std::string> names;
  for (const auto& c : commands) names.insert(c.app->get_name());

  app.set_config("--config", "", "JSON file of parameters; flags take precedence");
  app.config_formatter(std::make_shared<JsonConfig>(find_active(args, names), names));
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    const auto it = std::find_if(commands.begin(), commands.end(),
                                 [&](const Command& c) { return c.app->parsed(); });
    if (g.threads > 0) set_num_threads(g.threads);
    const Meta meta = collect_meta(app, *it->app, g);
    const Context ctx{g, meta};
    const std::string text = it->run(ctx);
    if (g.output == "-") {
      out << text;
    } else {
      std::ofstream file(g.output, std::ios::binary);
      if (!file) fail(ErrorCode::invalid_argument, "cannot write '" + g.output + "'");
      file << text;
      if (!file) fail(ErrorCode::invalid_argument, "write to '" + g.output + "' failed");
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: invalid-argument: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tprivacy::cli
