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

#ifndef ALIGNSCOPE_SYNTH_HPP_
#define ALIGNSCOPE_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "alignscope/corpus_io.hpp"
#include "alignscope/dialogue.hpp"

namespace alignscope {

// Planted-property corpora. Every turn is built from the same scaffold
// ("i think the X and the Y ..."), so the dependency labels of both turns
// are identical and the content-word overlap is fixed by construction.
// Only the semantic relation of the responder's words varies: aligned
// words are inflections of the initiator's words, drifted words are
// unrelated.
//   planted_decline  drift rises linearly from 0 to 1 over the rounds after
//                    `decline_start` (fraction of the dialogue); label scam,
//                    with a closing financial request annotated as marker
//   flat             constant small drift per dialogue; label non_scam
//   noise            independent uniform drift per round; label non_scam
enum class SynthKind { kPlantedDecline, kFlat, kNoise };

std::string_view to_string(SynthKind kind);
std::optional<SynthKind> parse_synth_kind(std::string_view name);

struct SynthOptions {
  SynthKind kind = SynthKind::kPlantedDecline;
  std::size_t n = 47;
  std::size_t rounds = 40;
  std::uint64_t seed = 1;
  double decline_start = 0.75;
  std::size_t shared_words = 2;
  std::size_t unique_words = 12;

  void validate() const;  // Error(kUsage) on out-of-range values
};

struct SynthCorpus {
  std::vector<RawDialogue> dialogues;
  MarkerAnnotations annotations;
};

// Deterministic in the options; dialogue i depends only on (seed, i).
SynthCorpus generate_synthetic(const SynthOptions& options);

// First round (1-based) with nonzero drift in a planted_decline dialogue.
std::size_t decline_start_round(const SynthOptions& options);

}  // namespace alignscope

#endif  // ALIGNSCOPE_SYNTH_HPP_
