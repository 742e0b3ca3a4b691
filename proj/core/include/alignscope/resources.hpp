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

#ifndef ALIGNSCOPE_RESOURCES_HPP_
#define ALIGNSCOPE_RESOURCES_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace alignscope {

// A versioned data asset: stopword list, POS lexicon, rule table or
// keyword lexicon. The digest travels into every output that used it.
struct Resource {
  std::string name;     // file name, e.g. "stopwords_en_v1.txt"
  std::string content;
  std::string sha256;   // lowercase hex
};

inline constexpr std::string_view kStopwordsResource = "stopwords_en_v1.txt";
inline constexpr std::string_view kPosLexiconResource = "pos_lexicon_en_v1.txt";
inline constexpr std::string_view kDepRulesResource = "dep_rules_en_v1.txt";
inline constexpr std::string_view kScamKeywordsResource = "scam_keywords_en_v1.txt";

std::string sha256_hex(std::string_view bytes);

// Looks the asset up in `directory` when given, otherwise uses the copy
// compiled into the library. Throws Error(kConfig) for unknown names or
// unreadable files.
Resource load_resource(std::string_view name,
                       const std::optional<std::filesystem::path>& directory = {});

Resource load_resource_file(const std::filesystem::path& path);

}  // namespace alignscope

#endif  // ALIGNSCOPE_RESOURCES_HPP_
