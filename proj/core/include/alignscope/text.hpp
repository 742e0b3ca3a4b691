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

#ifndef ALIGNSCOPE_TEXT_HPP_
#define ALIGNSCOPE_TEXT_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "alignscope/resources.hpp"

namespace alignscope {

inline constexpr std::string_view kTokenizerId = "unicode-word-v1";

// Splits UTF-8 text into lowercase word tokens. A word is a maximal run
// of letters, digits and non-ASCII letters; an apostrophe (' or U+2019)
// joins two word characters and is normalised to '. Malformed UTF-8
// bytes are treated as separators.
std::vector<std::string> tokenize(std::string_view text);

struct TokenSpan {
  std::string token;   // lowercase, as returned by tokenize
  std::size_t begin;   // code point offsets into the source text, [begin, end)
  std::size_t end;
};

// tokenize() with the code point range each token came from.
std::vector<TokenSpan> tokenize_with_spans(std::string_view text);

// True for Unicode white space code points.
bool is_space(char32_t cp);

// True when the token contains at least one letter (ASCII or non-ASCII).
bool has_alphabetic(std::string_view token);

// Decodes UTF-8 into code points; malformed bytes decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

class StopwordList {
 public:
  // One word per line; '#' starts a comment line.
  explicit StopwordList(const Resource& resource);

  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }
  const std::string& id() const { return id_; }
  const std::string& sha256() const { return sha256_; }

 private:
  std::set<std::string, std::less<>> words_;
  std::string id_;
  std::string sha256_;
};

struct ContentWordSet {
  std::set<std::string> tokens;
};

// Tokenize, lowercase, drop stopwords and tokens without letters.
ContentWordSet extract_content_words(std::string_view text,
                                     const StopwordList& stopwords);

}  // namespace alignscope

#endif  // ALIGNSCOPE_TEXT_HPP_
