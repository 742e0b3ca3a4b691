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

#ifndef ALIGNSCOPE_PROVIDERS_HPP_
#define ALIGNSCOPE_PROVIDERS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "alignscope/dependency.hpp"
#include "alignscope/embedding.hpp"
#include "alignscope/text.hpp"

namespace alignscope {

struct ProviderConfig {
  std::string tokenizer_id{kTokenizerId};
  std::string stopword_list_id = "stopwords_en_v1";
  std::string dep_provider_id{RulePosDependencyProvider::kId};
  std::string embed_provider_id{HashingEmbeddingProvider::kId};
  std::size_t embed_dim = HashingEmbeddingProvider::kDefaultDim;
  // Directory holding the data assets; the compiled-in copies are used
  // when unset.
  std::optional<std::filesystem::path> resource_dir;
};

nlohmann::json to_json(const ProviderConfig& config);

// Features of one utterance, as consumed by the alignment scores.
struct TurnFeatures {
  ContentWordSet words;
  DepLabelSet labels;
  UtteranceEmbedding embedding;
};

// Resolved, immutable provider set. Cheap to copy and safe to share.
struct FeatureProviders {
  ProviderConfig config;
  std::shared_ptr<const StopwordList> stopwords;
  std::shared_ptr<const DependencyProvider> dependency;
  std::shared_ptr<const EmbeddingProvider> embedding;

  TurnFeatures analyze(std::string_view text) const;
  // {tokenizer, stopwords, dependency, embedding} ids and digests.
  nlohmann::json fingerprints() const;
};

class ProviderRegistry {
 public:
  using DependencyFactory = std::function<std::shared_ptr<const DependencyProvider>(
      const ProviderConfig&)>;
  using EmbeddingFactory = std::function<std::shared_ptr<const EmbeddingProvider>(
      const ProviderConfig&)>;

  // Registry preloaded with the built-in providers.
  static ProviderRegistry with_builtins();

  void register_dependency(std::string id, DependencyFactory factory);
  void register_embedding(std::string id, EmbeddingFactory factory);

  // Resolves every id in `config`; throws Error(kConfig) for unknown ids.
  FeatureProviders build(const ProviderConfig& config) const;

 private:
  std::map<std::string, DependencyFactory, std::less<>> dependency_;
  std::map<std::string, EmbeddingFactory, std::less<>> embedding_;
};

// Shorthand for ProviderRegistry::with_builtins().build(config).
FeatureProviders make_default_providers(const ProviderConfig& config = {});

}  // namespace alignscope

#endif  // ALIGNSCOPE_PROVIDERS_HPP_
