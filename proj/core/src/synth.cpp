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

#include "alignscope/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "alignscope/error.hpp"

namespace alignscope {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
// Final letters chosen so no generated word or inflection hits a suffix
// rule of the POS lexicon.
constexpr std::string_view kFinals = "kmrtvxzp";

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Portable bounded draw; std distributions differ between libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

class WordSource {
 public:
  explicit WordSource(Draw& draw) : draw_(draw) {}

  std::string fresh() {
    for (;;) {
      std::string word;
      for (int i = 0; i < 3; ++i) {
        word += kConsonants[draw_.below(kConsonants.size())];
        word += kVowels[draw_.below(kVowels.size())];
      }
      word += kFinals[draw_.below(kFinals.size())];
      if (used_.insert(word).second) return word;
    }
  }

 private:
  Draw& draw_;
  std::set<std::string> used_;
};

std::string scaffold(const std::vector<std::string>& words) {
  std::string text = "i think";
  for (std::size_t i = 0; i < words.size(); ++i) {
    text += i == 0 ? " the " : " and the ";
    text += words[i];
  }
  return text;
}

double drift_at(const SynthOptions& options, std::size_t round, std::size_t start) {
  if (round < start) return 0.0;
  return static_cast<double>(round - start + 1) / static_cast<double>(options.rounds - start + 1);
}

RawDialogue make_dialogue(const SynthOptions& options, std::size_t index) {
  Draw draw(mix(options.seed ^ mix(index + 1)));
  WordSource words(draw);
  const std::size_t u = options.unique_words;
  const std::size_t start = decline_start_round(options);
  const std::size_t flat_drift = draw.below(u / 4 + 1);

  RawDialogue dialogue;
  char id[64];
  std::snprintf(id, sizeof id, "%s_%04zu", std::string(to_string(options.kind)).c_str(),
                index + 1);
  dialogue.dialogue_id = id;
  dialogue.initiator = "a";
  dialogue.label =
      options.kind == SynthKind::kPlantedDecline ? Label::kScam : Label::kNonScam;

  auto push = [&](const char* speaker, std::string text) {
    Message m;
    m.speaker_id = speaker;
    m.text = std::move(text);
    m.sequence_index = dialogue.messages.size();
    dialogue.messages.push_back(std::move(m));
  };

  // Vocabulary is fixed per dialogue so the discourse states see the same
  // content every round and only the drift level moves them.
  std::vector<std::string> shared;
  std::vector<std::string> initiator_words;
  std::vector<std::string> drift_words;
  for (std::size_t i = 0; i < options.shared_words; ++i) shared.push_back(words.fresh());
  for (std::size_t i = 0; i < u; ++i) initiator_words.push_back(words.fresh());
  for (std::size_t i = 0; i < u; ++i) drift_words.push_back(words.fresh());

  for (std::size_t r = 1; r <= options.rounds; ++r) {
    std::size_t drifted = 0;
    switch (options.kind) {
      case SynthKind::kPlantedDecline:
        drifted = static_cast<std::size_t>(std::lround(drift_at(options, r, start) * u));
        break;
      case SynthKind::kFlat:
        drifted = flat_drift;
        break;
      case SynthKind::kNoise:
        drifted = draw.below(u + 1);
        break;
    }
    std::vector<std::string> a_words = shared;
    std::vector<std::string> b_words = shared;
    for (std::size_t i = 0; i < u; ++i) {
      a_words.push_back(initiator_words[i]);
      b_words.push_back(i < u - drifted ? initiator_words[i] + "s" : drift_words[i]);
    }
    push("a", scaffold(a_words));
    push("b", scaffold(b_words));
  }
  if (options.kind == SynthKind::kPlantedDecline) {
    push("a", "could you send the fee by wire transfer today");
  }
  return dialogue;
}

}  // namespace

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::kPlantedDecline: return "planted_decline";
    case SynthKind::kFlat: return "flat";
    case SynthKind::kNoise: return "noise";
  }
  return "planted_decline";
}

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  if (name == "planted_decline") return SynthKind::kPlantedDecline;
  if (name == "flat") return SynthKind::kFlat;
  if (name == "noise") return SynthKind::kNoise;
  return std::nullopt;
}

void SynthOptions::validate() const {
  if (n < 1) throw Error(ErrorKind::kUsage, "synth: n must be at least 1");
  if (rounds < 2) throw Error(ErrorKind::kUsage, "synth: rounds must be at least 2");
  if (!(decline_start >= 0.0 && decline_start < 1.0)) {
    throw Error(ErrorKind::kUsage, "synth: decline_start must be in [0, 1)");
  }
  if (unique_words < 1 || unique_words > 64 || shared_words > 64) {
    throw Error(ErrorKind::kUsage, "synth: word counts out of range");
  }
}

std::size_t decline_start_round(const SynthOptions& options) {
  return static_cast<std::size_t>(
             std::floor(options.decline_start * static_cast<double>(options.rounds))) +
         1;
}

SynthCorpus generate_synthetic(const SynthOptions& options) {
  options.validate();
  SynthCorpus corpus;
  corpus.dialogues.reserve(options.n);
  for (std::size_t i = 0; i < options.n; ++i) {
    corpus.dialogues.push_back(make_dialogue(options, i));
    const RawDialogue& d = corpus.dialogues.back();
    if (d.label == Label::kScam) {
      corpus.annotations[d.dialogue_id] = d.messages.size() - 1;
    }
  }
  return corpus;
}

}  // namespace alignscope
