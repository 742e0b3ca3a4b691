// Copyright 2026 The alignscope Authors
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

#include "common.hpp"

#include <fstream>

#include "alignscope/corpus_io.hpp"

namespace alignscope::cli {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return kExitUsage;
    case ErrorKind::kData:
    case ErrorKind::kNotFound:
    case ErrorKind::kState:
    case ErrorKind::kConflict:
      return kExitData;
    case ErrorKind::kProvider:
    case ErrorKind::kInternal:
      break;
  }
  return kExitInternal;
}

void RunFlags::attach(CLI::App& app) {
  app.add_option("--config", config_file, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--alpha", alpha, "situation-model decay in [0,1]");
  app.add_option("--window", window, "rounds kept before the marker");
  app.add_option("--tau-high", tau_high, "pattern threshold for high-level slopes");
  app.add_option("--tau-low", tau_low, "pattern tolerance for low-level slopes");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--jobs", jobs, "scoring threads");
  app.add_option("--resource-dir", resource_dir, "directory overriding built-in resources")
      ->check(CLI::ExistingDirectory);
}

RunConfig RunFlags::resolve() const {
  RunConfig config;
  if (config_file) {
    nlohmann::json doc = nlohmann::json::parse(read_file(*config_file), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::kConfig, "config file is not valid JSON");
    apply_config_json(config, doc);
  }
  if (alpha) config.alpha = *alpha;
  if (window) config.window_rounds = *window;
  if (tau_high) config.tau_high = *tau_high;
  if (tau_low) config.tau_low = *tau_low;
  if (seed) config.seed = *seed;
  if (jobs) config.jobs = *jobs;
  if (resource_dir) config.providers.resource_dir = *resource_dir;
  config.validate();
  return config;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error(ErrorKind::kData, "write failed for " + path.string());
}

std::string pretty(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::string path_string(const std::filesystem::path& path) { return path.generic_string(); }

}  // namespace alignscope::cli
