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

#include "alignscope/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "alignscope/error.hpp"
#include "alignscope/resources.hpp"
#include "alignscope/text.hpp"

namespace alignscope {
namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  // splitmix64 finaliser spreads the low bits used for bucketing.
  hash ^= hash >> 30;
  hash *= 0xbf58476d1ce4e5b9ULL;
  hash ^= hash >> 27;
  hash *= 0x94d049bb133111ebULL;
  hash ^= hash >> 31;
  return hash;
}

}  // namespace

bool UtteranceEmbedding::is_zero() const {
  return std::all_of(vector.begin(), vector.end(), [](double v) { return v == 0.0; });
}

void l2_normalize(std::span<double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  if (sum == 0.0) return;
  const double norm = std::sqrt(sum);
  for (double& v : values) v /= norm;
}

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorKind::kConfig, "embedding dimension must be positive");
}

std::string HashingEmbeddingProvider::fingerprint() const {
  return sha256_hex(std::string(kId) + "\ndim=" + std::to_string(dim_));
}

std::vector<std::string> HashingEmbeddingProvider::features(std::string_view text) {
  std::set<std::string> unique;
  for (const std::string& token : tokenize(text)) {
    unique.insert("w:" + token);
    std::u32string padded = U"<" + decode_utf8(token) + U">";
    for (std::size_t n = 3; n <= 5; ++n) {
      if (padded.size() < n) break;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        unique.insert("c:" + encode_utf8(std::u32string_view(padded).substr(i, n)));
      }
    }
  }
  return {unique.begin(), unique.end()};
}

UtteranceEmbedding HashingEmbeddingProvider::embed(std::string_view text) const {
  std::vector<long long> counts(dim_, 0);
  const std::vector<std::string> all = features(text);
  for (const std::string& feature : all) {
    const std::uint64_t h = fnv1a(feature);
    counts[h % dim_] += (h >> 63) ? -1 : 1;
  }
  // Signed collisions can cancel every bucket; the first feature then
  // keeps its own contribution so that only featureless text maps to zero.
  if (!all.empty() && std::all_of(counts.begin(), counts.end(),
                                  [](long long c) { return c == 0; })) {
    const std::uint64_t h = fnv1a(all.front());
    counts[h % dim_] = (h >> 63) ? -1 : 1;
  }
  UtteranceEmbedding embedding;
  embedding.provider_id = id();
  embedding.vector.assign(counts.begin(), counts.end());
  l2_normalize(embedding.vector);
  return embedding;
}

}  // namespace alignscope
