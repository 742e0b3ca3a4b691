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

#include "alignscope/run_config.hpp"

#include "alignscope/error.hpp"

namespace alignscope {

void RunConfig::validate() const {
  validate_alpha(alpha);
  if (window_rounds < 1) throw Error(ErrorKind::kConfig, "window must be at least 1 round");
  if (!(tau_high >= 0.0) || !(tau_low >= 0.0)) {
    throw Error(ErrorKind::kConfig, "pattern thresholds must be non-negative");
  }
  if (jobs < 1) throw Error(ErrorKind::kConfig, "jobs must be at least 1");
  if (providers.embed_dim < 1) throw Error(ErrorKind::kConfig, "embed_dim must be positive");
}

nlohmann::json to_json(const RunConfig& config) {
  return {
      {"alpha", config.alpha},
      {"window_rounds", config.window_rounds},
      {"tau_high", config.tau_high},
      {"tau_low", config.tau_low},
      {"providers", to_json(config.providers)},
      {"seed", config.seed},
      {"paths", config.paths},
  };
}

namespace {

template <typename T>
T get_as(const nlohmann::json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kConfig, "config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void apply_config_json(RunConfig& config, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (key == "alpha") {
      config.alpha = get_as<double>(value, key);
    } else if (key == "window_rounds" || key == "window") {
      config.window_rounds = get_as<std::size_t>(value, key);
    } else if (key == "tau_high") {
      config.tau_high = get_as<double>(value, key);
    } else if (key == "tau_low") {
      config.tau_low = get_as<double>(value, key);
    } else if (key == "seed") {
      config.seed = get_as<std::uint64_t>(value, key);
    } else if (key == "jobs") {
      config.jobs = get_as<std::size_t>(value, key);
    } else if (key == "paths") {
      config.paths = get_as<std::map<std::string, std::string>>(value, key);
    } else if (key == "providers") {
      if (!value.is_object()) throw Error(ErrorKind::kConfig, "'providers' must be an object");
      ProviderConfig& p = config.providers;
      for (const auto& [pkey, pvalue] : value.items()) {
        if (pkey == "tokenizer_id") {
          p.tokenizer_id = get_as<std::string>(pvalue, pkey);
        } else if (pkey == "stopword_list_id") {
          p.stopword_list_id = get_as<std::string>(pvalue, pkey);
        } else if (pkey == "dep_provider_id") {
          p.dep_provider_id = get_as<std::string>(pvalue, pkey);
        } else if (pkey == "embed_provider_id") {
          p.embed_provider_id = get_as<std::string>(pvalue, pkey);
        } else if (pkey == "embed_dim") {
          p.embed_dim = get_as<std::size_t>(pvalue, pkey);
        } else if (pkey == "resource_dir") {
          if (pvalue.is_null()) {
            p.resource_dir.reset();
          } else {
            p.resource_dir = get_as<std::string>(pvalue, pkey);
          }
        } else {
          throw Error(ErrorKind::kConfig, "unknown provider config key '" + pkey + "'");
        }
      }
    } else {
      throw Error(ErrorKind::kConfig, "unknown config key '" + key + "'");
    }
  }
}

}  // namespace alignscope
