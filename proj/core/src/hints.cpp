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

#include "alignscope/hints.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alignscope/error.hpp"
#include "alignscope/stats.hpp"
#include "alignscope/text.hpp"

namespace alignscope {

std::string_view to_string(HintCondition condition) {
  switch (condition) {
    case HintCondition::kNone: return "none";
    case HintCondition::kKeyword: return "keyword";
    case HintCondition::kLowLevel: return "low_level";
    case HintCondition::kHighLevel: return "high_level";
    case HintCondition::kMultiLevel: return "multi_level";
  }
  return "?";
}

std::optional<HintCondition> parse_condition(std::string_view name) {
  for (HintCondition condition : kAllConditions) {
    if (to_string(condition) == name) return condition;
  }
  return std::nullopt;
}

std::size_t condition_index(HintCondition condition) {
  return static_cast<std::size_t>(condition);
}

std::vector<AlignmentVector> window_scores(std::span<const AlignmentVector> scores,
                                           std::size_t t, std::size_t w) {
  if (t < 1 || t > scores.size()) {
    throw Error(ErrorKind::kInternal, "round " + std::to_string(t) + " outside trajectory");
  }
  if (w < 1) throw Error(ErrorKind::kConfig, "hint window must be at least 1 round");
  const std::size_t first = t > w ? t - w : 0;
  return {scores.begin() + static_cast<std::ptrdiff_t>(first),
          scores.begin() + static_cast<std::ptrdiff_t>(t)};
}

namespace {

std::string describe(const PatternFlag& flag, const PatternThresholds& thresholds) {
  std::ostringstream text;
  if (flag.active) {
    text << "Over the last " << flag.window
         << " rounds, meaning-level alignment (semantic and situation-model) has been "
            "falling while wording and sentence structure (lexical and syntactic) stay "
            "matched. Surface rapport without shared meaning has been seen before scam "
            "attempts.";
    return text.str();
  }
  auto level = [&](std::string_view name, double slope, bool high) {
    std::string state;
    if (high) {
      state = slope <= -thresholds.tau_high ? "falling" : "not falling";
    } else {
      state = std::fabs(slope) <= thresholds.tau_low ? "stable" : "changing";
    }
    return std::string(name) + " " + state;
  };
  text << "No cross-level divergence over the last " << flag.window << " rounds ("
       << level("semantic", *flag.sem_slope, true) << ", "
       << level("situation-model", *flag.sit_slope, true) << ", "
       << level("lexical", *flag.lex_slope, false) << ", "
       << level("syntactic", *flag.syn_slope, false) << ").";
  return text.str();
}

}  // namespace

PatternFlag detect_pattern(std::span<const AlignmentVector> window,
                           const PatternThresholds& thresholds) {
  PatternFlag flag;
  flag.window = window.size();
  if (window.size() < kMinPatternRounds) {
    flag.reason = "insufficient rounds";
    flag.text = "Not enough rounds yet to read a trend (" + std::to_string(window.size()) +
                " of " + std::to_string(kMinPatternRounds) + ").";
    return flag;
  }
  auto slope = [&](Score score) {
    std::vector<double> values;
    values.reserve(window.size());
    for (const AlignmentVector& v : window) values.push_back(v.get(score));
    return stats::ols_slope(values);
  };
  flag.sem_slope = slope(Score::kSem);
  flag.sit_slope = slope(Score::kSit);
  flag.lex_slope = slope(Score::kLex);
  flag.syn_slope = slope(Score::kSyn);
  flag.active = *flag.sem_slope <= -thresholds.tau_high &&
                *flag.sit_slope <= -thresholds.tau_high &&
                std::fabs(*flag.lex_slope) <= thresholds.tau_low &&
                std::fabs(*flag.syn_slope) <= thresholds.tau_low;
  flag.text = describe(flag, thresholds);
  return flag;
}

KeywordLexicon::KeywordLexicon(const Resource& resource)
    : id_(resource.name), sha256_(resource.sha256) {
  std::istringstream in(resource.content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    std::vector<std::string> words = tokenize(line);
    if (words.empty()) continue;
    std::string phrase = words.front();
    for (std::size_t i = 1; i < words.size(); ++i) phrase += " " + words[i];
    phrases_.emplace_back(std::move(phrase), std::move(words));
  }
}

KeywordLexicon::KeywordLexicon(std::vector<std::string> phrases, std::string id)
    : id_(std::move(id)) {
  std::string joined;
  for (const std::string& p : phrases) {
    joined += p + "\n";
    std::vector<std::string> words = tokenize(p);
    if (words.empty()) continue;
    std::string phrase = words.front();
    for (std::size_t i = 1; i < words.size(); ++i) phrase += " " + words[i];
    phrases_.emplace_back(std::move(phrase), std::move(words));
  }
  sha256_ = sha256_hex(joined);
}

std::vector<KeywordLexicon::Match> KeywordLexicon::find(std::string_view text) const {
  std::vector<Match> matches;
  if (phrases_.empty()) return matches;
  const std::u32string cps = decode_utf8(text);
  const std::vector<TokenSpan> tokens = tokenize_with_spans(text);
  auto only_space_between = [&](const TokenSpan& a, const TokenSpan& b) {
    for (std::size_t i = a.end; i < b.begin; ++i) {
      if (!is_space(cps[i])) return false;
    }
    return true;
  };
  for (const auto& [phrase, words] : phrases_) {
    for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
      bool hit = true;
      for (std::size_t k = 0; k < words.size() && hit; ++k) {
        hit = tokens[i + k].token == words[k] &&
              (k == 0 || only_space_between(tokens[i + k - 1], tokens[i + k]));
      }
      if (hit) matches.push_back(Match{phrase, tokens[i].begin, tokens[i + words.size() - 1].end});
    }
  }
  std::stable_sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  return matches;
}

std::vector<KeywordAlert> keyword_alerts(std::size_t round, const RoundText& text,
                                         const KeywordLexicon& lexicon) {
  std::vector<KeywordAlert> alerts;
  for (const auto& [role, body] : {std::pair{Role::kA, text.initiator},
                                   std::pair{Role::kB, text.response}}) {
    for (KeywordLexicon::Match& m : lexicon.find(body)) {
      alerts.push_back(KeywordAlert{round, role, std::move(m.phrase), m.begin, m.end});
    }
  }
  return alerts;
}

HintPacket build_hint(HintCondition condition, std::span<const AlignmentVector> scores,
                      std::size_t t, const RoundText& text, const KeywordLexicon& lexicon,
                      const HintSettings& settings) {
  HintPacket packet;
  packet.round_index = t;
  packet.condition = condition;
  switch (condition) {
    case HintCondition::kNone:
      return packet;
    case HintCondition::kKeyword:
      packet.keyword_alerts = keyword_alerts(t, text, lexicon);
      return packet;
    case HintCondition::kLowLevel:
    case HintCondition::kHighLevel:
    case HintCondition::kMultiLevel:
      break;
  }
  const std::vector<AlignmentVector> window = window_scores(scores, t, settings.window);
  const bool low = condition != HintCondition::kHighLevel;
  const bool high = condition != HintCondition::kLowLevel;
  for (const AlignmentVector& v : window) {
    WindowEntry entry;
    entry.round = v.round;
    if (low) {
      entry.lex = v.lex;
      entry.syn = v.syn;
    }
    if (high) {
      entry.sem = v.sem;
      entry.sit = v.sit;
    }
    packet.score_window.push_back(entry);
  }
  if (condition == HintCondition::kMultiLevel) {
    packet.pattern = detect_pattern(window, settings.thresholds);
  }
  return packet;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& value) {
  if (!value) return nullptr;
  const double r = std::round(*value * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

}  // namespace

nlohmann::json to_json(const HintPacket& packet) {
  nlohmann::json window = nlohmann::json::array();
  for (const WindowEntry& entry : packet.score_window) {
    nlohmann::json item = {{"round", entry.round}};
    if (entry.lex) item["lex"] = optional_number(entry.lex);
    if (entry.syn) item["syn"] = optional_number(entry.syn);
    if (entry.sem) item["sem"] = optional_number(entry.sem);
    if (entry.sit) item["sit"] = optional_number(entry.sit);
    window.push_back(std::move(item));
  }
  nlohmann::json alerts = nlohmann::json::array();
  for (const KeywordAlert& alert : packet.keyword_alerts) {
    alerts.push_back({{"message_ref", {{"round", alert.round},
                                       {"role", alert.role == Role::kA ? "A" : "B"}}},
                      {"matched_phrase", alert.matched_phrase},
                      {"span", {alert.begin, alert.end}}});
  }
  nlohmann::json pattern = nullptr;
  if (packet.pattern) {
    const PatternFlag& p = *packet.pattern;
    pattern = {{"active", p.active},
               {"window", p.window},
               {"high_level_slopes",
                {{"sem", optional_number(p.sem_slope)}, {"sit", optional_number(p.sit_slope)}}},
               {"low_level_slopes",
                {{"lex", optional_number(p.lex_slope)}, {"syn", optional_number(p.syn_slope)}}},
               {"text", p.text}};
    if (p.reason) pattern["reason"] = *p.reason;
  }
  return {
      {"schema_version", kHintSchemaVersion},
      {"round", packet.round_index},
      {"score_window", std::move(window)},
      {"pattern", std::move(pattern)},
      {"keyword_alerts", std::move(alerts)},
  };
}

}  // namespace alignscope
