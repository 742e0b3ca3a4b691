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

#include "alignscope/dependency.hpp"

#include <algorithm>
#include <sstream>

#include "alignscope/error.hpp"
#include "alignscope/text.hpp"

namespace alignscope {
namespace {

std::vector<std::vector<std::string>> data_lines(const Resource& resource) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(resource.content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string field; fields >> field;) parts.push_back(field);
    if (!parts.empty()) lines.push_back(std::move(parts));
  }
  return lines;
}

[[noreturn]] void bad_line(const Resource& resource, const std::string& directive) {
  throw Error(ErrorKind::kConfig,
              resource.name + ": malformed '" + directive + "' line");
}

}  // namespace

RulePosDependencyProvider::RulePosDependencyProvider(const Resource& lexicon,
                                                     const Resource& rules) {
  for (const auto& parts : data_lines(lexicon)) {
    const std::string& directive = parts[0];
    if (directive == "word" || directive == "suffix") {
      if (parts.size() < 3) bad_line(lexicon, directive);
      for (std::size_t i = 2; i < parts.size(); ++i) {
        if (directive == "word") {
          words_.emplace(parts[i], parts[1]);
        } else {
          suffixes_.emplace_back(parts[i], parts[1]);
        }
      }
    } else if (directive == "number" || directive == "default") {
      if (parts.size() != 2) bad_line(lexicon, directive);
      (directive == "number" ? number_tag_ : default_tag_) = parts[1];
    } else {
      bad_line(lexicon, directive);
    }
  }
  if (default_tag_.empty()) bad_line(lexicon, "default");
  if (number_tag_.empty()) number_tag_ = default_tag_;
  std::stable_sort(suffixes_.begin(), suffixes_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  for (const auto& parts : data_lines(rules)) {
    if (parts[0] == "labels") {
      inventory_.insert(parts.begin() + 1, parts.end());
    } else if (parts[0] == "rule") {
      if (parts.size() != 4) bad_line(rules, "rule");
      if (!inventory_.contains(parts[3])) {
        throw Error(ErrorKind::kConfig,
                    rules.name + ": label '" + parts[3] + "' not in inventory");
      }
      rules_.push_back({{parts[1], parts[2]}, parts[3]});
    } else {
      bad_line(rules, parts[0]);
    }
  }
  fingerprint_ = sha256_hex(std::string(kId) + "\n" + lexicon.sha256 + "\n" + rules.sha256);
}

std::string RulePosDependencyProvider::tag(std::string_view token) const {
  if (auto it = words_.find(token); it != words_.end()) return it->second;
  if (!has_alphabetic(token)) return number_tag_;
  for (const auto& [suffix, pos] : suffixes_) {
    if (token.size() >= suffix.size() + 2 && token.ends_with(suffix)) return pos;
  }
  return default_tag_;
}

std::vector<std::string> RulePosDependencyProvider::tag_all(std::string_view text) const {
  std::vector<std::string> tags;
  for (const std::string& token : tokenize(text)) tags.push_back(tag(token));
  return tags;
}

DepLabelSet RulePosDependencyProvider::extract(std::string_view text) const {
  DepLabelSet set;
  const std::vector<std::string> tags = tag_all(text);
  for (std::size_t i = 0; i + 1 < tags.size(); ++i) {
    for (const auto& [pair, label] : rules_) {
      const bool left = pair.first == "*" || pair.first == tags[i];
      const bool right = pair.second == "*" || pair.second == tags[i + 1];
      if (left && right) {
        set.labels.insert(label);
        break;
      }
    }
  }
  return set;
}

}  // namespace alignscope
