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

#include "alignscope/text.hpp"

#include <sstream>

namespace alignscope {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool in_range(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_ascii_letter(char32_t cp) {
  return in_range(cp, 'a', 'z') || in_range(cp, 'A', 'Z');
}

bool is_ascii_digit(char32_t cp) { return in_range(cp, '0', '9'); }

bool is_non_ascii_digit(char32_t cp) {
  return in_range(cp, 0x0660, 0x0669) || in_range(cp, 0x06F0, 0x06F9) ||
         in_range(cp, 0x0966, 0x096F) || in_range(cp, 0xFF10, 0xFF19);
}

// Non-ASCII code points are word characters unless they fall in a known
// punctuation, symbol, space or emoji block.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) return is_ascii_letter(cp) || is_ascii_digit(cp);
  if (cp == kReplacement) return false;
  if (in_range(cp, 0x80, 0xBF) || cp == 0xD7 || cp == 0xF7) return false;
  if (in_range(cp, 0x2000, 0x2BFF)) return false;
  if (in_range(cp, 0x3000, 0x303F)) return false;
  if (in_range(cp, 0xFE00, 0xFE0F) || in_range(cp, 0xFE30, 0xFE4F)) return false;
  if (in_range(cp, 0xFF01, 0xFF0F) || in_range(cp, 0xFF1A, 0xFF20) ||
      in_range(cp, 0xFF3B, 0xFF40) || in_range(cp, 0xFF5B, 0xFF65)) {
    return false;
  }
  if (in_range(cp, 0x1F000, 0x1FAFF)) return false;
  return true;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

char32_t to_lower(char32_t cp) {
  if (in_range(cp, 'A', 'Z')) return cp + 0x20;
  if (in_range(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (in_range(cp, 0x100, 0x137) || in_range(cp, 0x14A, 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (in_range(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 0x20;
  if (in_range(cp, 0x410, 0x42F)) return cp + 0x20;
  if (in_range(cp, 0x400, 0x40F)) return cp + 0x50;
  return cp;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t length = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      length = 1;
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      length = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      length = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      length = 4;
      cp = lead & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + length > text.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool valid = true;
    for (std::size_t k = 1; k < length; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += length;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::vector<TokenSpan> tokenize_with_spans(std::string_view text) {
  const std::u32string cps = decode_utf8(text);
  std::vector<TokenSpan> tokens;
  std::u32string current;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_word_char(cp)) {
      if (current.empty()) begin = i;
      current.push_back(to_lower(cp));
    } else if (is_apostrophe(cp) && !current.empty() && i + 1 < cps.size() &&
               is_word_char(cps[i + 1])) {
      current.push_back(U'\'');
    } else if (!current.empty()) {
      tokens.push_back(TokenSpan{encode_utf8(current), begin, i});
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(TokenSpan{encode_utf8(current), begin, cps.size()});
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (TokenSpan& span : tokenize_with_spans(text)) tokens.push_back(std::move(span.token));
  return tokens;
}

bool is_space(char32_t cp) {
  return cp == U' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool has_alphabetic(std::string_view token) {
  for (char32_t cp : decode_utf8(token)) {
    if (is_ascii_letter(cp)) return true;
    if (cp >= 0x80 && is_word_char(cp) && !is_non_ascii_digit(cp)) return true;
  }
  return false;
}

StopwordList::StopwordList(const Resource& resource)
    : id_(resource.name), sha256_(resource.sha256) {
  std::istringstream in(resource.content);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    words_.insert(line);
  }
}

bool StopwordList::contains(std::string_view token) const {
  return words_.find(token) != words_.end();
}

ContentWordSet extract_content_words(std::string_view text,
                                     const StopwordList& stopwords) {
  ContentWordSet set;
  for (std::string& token : tokenize(text)) {
    if (stopwords.contains(token) || !has_alphabetic(token)) continue;
    set.tokens.insert(std::move(token));
  }
  return set;
}

}  // namespace alignscope
