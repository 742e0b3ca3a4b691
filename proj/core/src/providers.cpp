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

#include "alignscope/providers.hpp"

#include "alignscope/error.hpp"

namespace alignscope {

nlohmann::json to_json(const ProviderConfig& config) {
  return {
      {"tokenizer_id", config.tokenizer_id},
      {"stopword_list_id", config.stopword_list_id},
      {"dep_provider_id", config.dep_provider_id},
      {"embed_provider_id", config.embed_provider_id},
      {"embed_dim", config.embed_dim},
      {"resource_dir", config.resource_dir ? nlohmann::json(config.resource_dir->string())
                                           : nlohmann::json(nullptr)},
  };
}

TurnFeatures FeatureProviders::analyze(std::string_view text) const {
  return TurnFeatures{extract_content_words(text, *stopwords), dependency->extract(text),
                      embedding->embed(text)};
}

nlohmann::json FeatureProviders::fingerprints() const {
  return {
      {"tokenizer", {{"id", config.tokenizer_id}}},
      {"stopwords", {{"id", stopwords->id()}, {"sha256", stopwords->sha256()}}},
      {"dependency", {{"id", dependency->id()}, {"fingerprint", dependency->fingerprint()}}},
      {"embedding",
       {{"id", embedding->id()},
        {"dim", embedding->dim()},
        {"fingerprint", embedding->fingerprint()}}},
  };
}

ProviderRegistry ProviderRegistry::with_builtins() {
  ProviderRegistry registry;
  registry.register_dependency(
      std::string(RulePosDependencyProvider::kId), [](const ProviderConfig& config) {
        return std::make_shared<const RulePosDependencyProvider>(
            load_resource(kPosLexiconResource, config.resource_dir),
            load_resource(kDepRulesResource, config.resource_dir));
      });
  registry.register_embedding(
      std::string(HashingEmbeddingProvider::kId), [](const ProviderConfig& config) {
        return std::make_shared<const HashingEmbeddingProvider>(config.embed_dim);
      });
  return registry;
}

void ProviderRegistry::register_dependency(std::string id, DependencyFactory factory) {
  dependency_[std::move(id)] = std::move(factory);
}

void ProviderRegistry::register_embedding(std::string id, EmbeddingFactory factory) {
  embedding_[std::move(id)] = std::move(factory);
}

FeatureProviders ProviderRegistry::build(const ProviderConfig& config) const {
  if (config.tokenizer_id != kTokenizerId) {
    throw Error(ErrorKind::kConfig, "unknown tokenizer '" + config.tokenizer_id + "'");
  }
  auto dep = dependency_.find(config.dep_provider_id);
  if (dep == dependency_.end()) {
    throw Error(ErrorKind::kConfig,
                "unknown dependency provider '" + config.dep_provider_id + "'");
  }
  auto emb = embedding_.find(config.embed_provider_id);
  if (emb == embedding_.end()) {
    throw Error(ErrorKind::kConfig,
                "unknown embedding provider '" + config.embed_provider_id + "'");
  }
  FeatureProviders providers;
  providers.config = config;
  providers.stopwords = std::make_shared<const StopwordList>(
      load_resource(config.stopword_list_id + ".txt", config.resource_dir));
  providers.dependency = dep->second(config);
  providers.embedding = emb->second(config);
  if (providers.embedding->dim() != config.embed_dim) {
    throw Error(ErrorKind::kConfig, "embedding provider '" + config.embed_provider_id +
                                        "' ignores the configured dimension");
  }
  return providers;
}

FeatureProviders make_default_providers(const ProviderConfig& config) {
  return ProviderRegistry::with_builtins().build(config);
}

}  // namespace alignscope
