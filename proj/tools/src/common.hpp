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

// Shared plumbing for the alignscope subcommands.
#ifndef ALIGNSCOPE_TOOLS_COMMON_HPP_
#define ALIGNSCOPE_TOOLS_COMMON_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "alignscope/error.hpp"
#include "alignscope/run_config.hpp"

namespace alignscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

int exit_code(ErrorKind kind);

// Flags shared by every scoring command. Values given on the command line
// win over the --config file, which wins over built-in defaults.
struct RunFlags {
  std::optional<std::filesystem::path> config_file;
  std::optional<double> alpha;
  std::optional<std::size_t> window;
  std::optional<double> tau_high;
  std::optional<double> tau_low;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> resource_dir;

  void attach(CLI::App& app);
  RunConfig resolve() const;
};

// Writes `content` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string pretty(const nlohmann::json& doc);

// Generic form of a path for embedding in outputs.
std::string path_string(const std::filesystem::path& path);

void register_corpus_commands(CLI::App& app);
void register_study_commands(CLI::App& app);

}  // namespace alignscope::cli

#endif  // ALIGNSCOPE_TOOLS_COMMON_HPP_
