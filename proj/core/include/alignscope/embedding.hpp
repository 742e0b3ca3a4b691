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

#ifndef ALIGNSCOPE_EMBEDDING_HPP_
#define ALIGNSCOPE_EMBEDDING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alignscope {

// Either the zero vector or unit Euclidean norm.
struct UtteranceEmbedding {
  std::vector<double> vector;
  std::string provider_id;

  std::size_t dim() const { return vector.size(); }
  bool is_zero() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual std::string fingerprint() const = 0;
  virtual std::size_t dim() const = 0;
  // Implementations signal failure by throwing; callers never substitute
  // a fallback vector.
  virtual UtteranceEmbedding embed(std::string_view text) const = 0;
};

// Signed feature hashing of word unigrams and character 3..5-grams (with
// word-boundary markers) followed by l2 normalisation. Each distinct
// feature contributes once, so repetition does not change the vector.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  static constexpr std::string_view kId = "hash-ngram-v1";
  static constexpr std::size_t kDefaultDim = 256;

  explicit HashingEmbeddingProvider(std::size_t dim = kDefaultDim);

  std::string id() const override { return std::string(kId); }
  std::string fingerprint() const override;
  std::size_t dim() const override { return dim_; }
  UtteranceEmbedding embed(std::string_view text) const override;

  static std::vector<std::string> features(std::string_view text);

 private:
  std::size_t dim_;
};

// Scales `values` to unit norm in place; leaves an all-zero vector alone.
void l2_normalize(std::span<double> values);

}  // namespace alignscope

#endif  // ALIGNSCOPE_EMBEDDING_HPP_
