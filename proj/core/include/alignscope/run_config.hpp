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

#ifndef ALIGNSCOPE_RUN_CONFIG_HPP_
#define ALIGNSCOPE_RUN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/providers.hpp"

namespace alignscope {

inline constexpr std::size_t kDefaultWindowRounds = 40;
inline constexpr double kDefaultTauHigh = 0.02;
inline constexpr double kDefaultTauLow = 0.01;

// Everything that determines a run's outputs. Serialised into the
// metadata block of every artifact a command writes.
struct RunConfig {
  double alpha = kDefaultAlpha;
  std::size_t window_rounds = kDefaultWindowRounds;
  double tau_high = kDefaultTauHigh;
  double tau_low = kDefaultTauLow;
  ProviderConfig providers;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::map<std::string, std::string> paths;  // input paths by role

  // Throws Error(kConfig) when a value is out of range.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);

// Overlays keys present in `overrides` (same names as to_json, with
// "providers" as a nested object) onto `config`. Unknown keys are a
// configuration error.
void apply_config_json(RunConfig& config, const nlohmann::json& overrides);

}  // namespace alignscope

#endif  // ALIGNSCOPE_RUN_CONFIG_HPP_
