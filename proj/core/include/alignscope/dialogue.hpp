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

#ifndef ALIGNSCOPE_DIALOGUE_HPP_
#define ALIGNSCOPE_DIALOGUE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alignscope {

enum class Label { kScam, kNonScam };

std::string_view to_string(Label label);
// Accepts "scam", "non_scam" and "non-scam".
std::optional<Label> parse_label(std::string_view text);

struct Message {
  std::string speaker_id;
  std::size_t sequence_index = 0;
  std::string text;
  std::optional<std::string> timestamp;
};

// One or more consecutive same-speaker messages joined by a single space.
struct Turn {
  std::string speaker_id;
  std::string text;
  std::vector<std::size_t> source_indices;
};

// Ordered initiator/response pair. `index` is 1-based.
struct Round {
  std::size_t index = 0;
  Turn initiator;
  Turn response;
};

// A dialogue as it appears in a corpus file, before any segmentation.
struct RawDialogue {
  std::string dialogue_id;
  std::optional<Label> label;
  std::optional<std::string> initiator;
  std::optional<std::size_t> scam_marker;
  std::vector<Message> messages;
};

struct Dialogue {
  std::string dialogue_id;
  std::string role_a_speaker_id;
  std::string role_b_speaker_id;
  std::vector<Round> rounds;
  std::optional<Label> label;
  std::optional<std::size_t> scam_marker;
};

struct RolePair {
  std::string role_a;
  std::string role_b;
};

// Collapses runs of same-speaker messages. Throws Error(kData) with
// "multiparty transcript unsupported" when more than two speakers occur.
std::vector<Turn> merge_turns(std::span<const Message> messages);

// Pairs (turn 2k-1, turn 2k) starting at role A's first turn. Leading
// role-B turns and a trailing unpaired role-A turn are dropped. Turns
// must alternate speakers.
std::vector<Round> segment_rounds(std::span<const Turn> turns,
                                  std::string_view role_a);

// Role A is the metadata initiator when present, else the first speaker.
// Requires exactly two distinct speakers.
RolePair assign_roles(const RawDialogue& dialogue);

// Roles, merging and segmentation in one pass. No truncation is applied.
Dialogue build_dialogue(const RawDialogue& raw);

}  // namespace alignscope

#endif  // ALIGNSCOPE_DIALOGUE_HPP_
