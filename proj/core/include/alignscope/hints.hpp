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

#ifndef ALIGNSCOPE_HINTS_HPP_
#define ALIGNSCOPE_HINTS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/resources.hpp"
#include "alignscope/run_config.hpp"

namespace alignscope {

inline constexpr int kHintSchemaVersion = 1;
inline constexpr std::size_t kDefaultHintWindow = 5;
inline constexpr std::size_t kMinPatternRounds = 3;

// Hints 0..4 in study order.
enum class HintCondition { kNone, kKeyword, kLowLevel, kHighLevel, kMultiLevel };
inline constexpr std::array<HintCondition, 5> kAllConditions = {
    HintCondition::kNone, HintCondition::kKeyword, HintCondition::kLowLevel,
    HintCondition::kHighLevel, HintCondition::kMultiLevel};

std::string_view to_string(HintCondition condition);
std::optional<HintCondition> parse_condition(std::string_view name);
std::size_t condition_index(HintCondition condition);

struct PatternThresholds {
  double tau_high = kDefaultTauHigh;  // per-round decline both high-level scores must reach
  double tau_low = kDefaultTauLow;    // per-round drift low-level scores must stay within
};

struct PatternFlag {
  bool active = false;
  std::size_t window = 0;  // rounds the slopes were fitted on
  // OLS slopes per round; absent when the window is too short.
  std::optional<double> sem_slope;
  std::optional<double> sit_slope;
  std::optional<double> lex_slope;
  std::optional<double> syn_slope;
  std::optional<std::string> reason;  // why the flag could not be evaluated
  std::string text;
};

// Rounds max(1, t-w+1)..t of `scores` (which hold rounds 1..N in order).
std::vector<AlignmentVector> window_scores(std::span<const AlignmentVector> scores,
                                           std::size_t t, std::size_t w = kDefaultHintWindow);

// Active iff both high-level slopes are <= -tau_high and both low-level
// slopes lie within [-tau_low, tau_low].
PatternFlag detect_pattern(std::span<const AlignmentVector> window,
                           const PatternThresholds& thresholds = {});

class KeywordLexicon {
 public:
  // One phrase per line; '#' comment lines and blank lines are skipped.
  explicit KeywordLexicon(const Resource& resource);
  KeywordLexicon(std::vector<std::string> phrases, std::string id);

  const std::string& id() const { return id_; }
  const std::string& sha256() const { return sha256_; }
  std::size_t size() const { return phrases_.size(); }

  struct Match {
    std::string phrase;
    std::size_t begin;  // code point offsets, [begin, end)
    std::size_t end;
  };
  // Case-insensitive whole-word matches of every phrase; words of a phrase
  // may be separated by any run of white space. Sorted by position.
  std::vector<Match> find(std::string_view text) const;

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> phrases_;
  std::string id_;
  std::string sha256_;
};

enum class Role { kA, kB };

struct KeywordAlert {
  std::size_t round = 0;
  Role role = Role::kA;
  std::string matched_phrase;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct RoundText {
  std::string_view initiator;
  std::string_view response;
};

std::vector<KeywordAlert> keyword_alerts(std::size_t round, const RoundText& text,
                                         const KeywordLexicon& lexicon);

struct WindowEntry {
  std::size_t round = 0;
  std::optional<double> lex;
  std::optional<double> syn;
  std::optional<double> sem;
  std::optional<double> sit;
};

struct HintPacket {
  std::size_t round_index = 0;
  HintCondition condition = HintCondition::kNone;
  std::vector<WindowEntry> score_window;
  std::optional<PatternFlag> pattern;
  std::vector<KeywordAlert> keyword_alerts;
};

struct HintSettings {
  PatternThresholds thresholds;
  std::size_t window = kDefaultHintWindow;
};

// Payload for round t under `condition`:
//   none        nothing
//   keyword     keyword alerts for round t's two messages
//   low_level   lex and syn over the score window
//   high_level  sem and sit over the score window
//   multi_level all four scores plus the cross-level pattern flag
HintPacket build_hint(HintCondition condition, std::span<const AlignmentVector> scores,
                      std::size_t t, const RoundText& text, const KeywordLexicon& lexicon,
                      const HintSettings& settings = {});

// Wire form shared with the review UI. The condition name is not part of
// it; clients render whichever fields are present.
nlohmann::json to_json(const HintPacket& packet);

}  // namespace alignscope

#endif  // ALIGNSCOPE_HINTS_HPP_
