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

#ifndef ALIGNSCOPE_DEPENDENCY_HPP_
#define ALIGNSCOPE_DEPENDENCY_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alignscope/resources.hpp"

namespace alignscope {

struct DepLabelSet {
  std::set<std::string> labels;
};

// Source of dependency-relation labels for an utterance. Implementations
// are immutable after construction and safe to share across threads.
class DependencyProvider {
 public:
  virtual ~DependencyProvider() = default;

  virtual std::string id() const = 0;
  // Digest identifying the provider's version and data files.
  virtual std::string fingerprint() const = 0;
  // Closed label inventory; every extracted label is a member.
  virtual const std::set<std::string>& inventory() const = 0;
  virtual DepLabelSet extract(std::string_view text) const = 0;
};

// Deterministic built-in: tags tokens from a closed POS lexicon with suffix
// fallbacks, then emits a label for each adjacent tag pair that matches the
// rule table.
class RulePosDependencyProvider final : public DependencyProvider {
 public:
  static constexpr std::string_view kId = "rule-pos-pairs-v1";

  RulePosDependencyProvider(const Resource& lexicon, const Resource& rules);

  std::string id() const override { return std::string(kId); }
  std::string fingerprint() const override { return fingerprint_; }
  const std::set<std::string>& inventory() const override { return inventory_; }
  DepLabelSet extract(std::string_view text) const override;

  std::string tag(std::string_view token) const;
  std::vector<std::string> tag_all(std::string_view text) const;

 private:
  std::map<std::string, std::string, std::less<>> words_;
  std::vector<std::pair<std::string, std::string>> suffixes_;  // longest first
  std::string number_tag_;
  std::string default_tag_;
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>> rules_;
  std::set<std::string> inventory_;
  std::string fingerprint_;
};

}  // namespace alignscope

#endif  // ALIGNSCOPE_DEPENDENCY_HPP_
