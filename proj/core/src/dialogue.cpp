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

#include "alignscope/dialogue.hpp"

#include <algorithm>

#include "alignscope/error.hpp"

namespace alignscope {

std::string_view to_string(Label label) {
  return label == Label::kScam ? "scam" : "non_scam";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "scam") return Label::kScam;
  if (text == "non_scam" || text == "non-scam") return Label::kNonScam;
  return std::nullopt;
}

std::vector<Turn> merge_turns(std::span<const Message> messages) {
  std::vector<Turn> turns;
  std::vector<std::string_view> speakers;
  for (const Message& message : messages) {
    if (std::find(speakers.begin(), speakers.end(), message.speaker_id) ==
        speakers.end()) {
      speakers.push_back(message.speaker_id);
      if (speakers.size() > 2) {
        throw Error(ErrorKind::kData, "multiparty transcript unsupported");
      }
    }
    if (!turns.empty() && turns.back().speaker_id == message.speaker_id) {
      Turn& turn = turns.back();
      turn.text += ' ';
      turn.text += message.text;
      turn.source_indices.push_back(message.sequence_index);
    } else {
      turns.push_back(
          Turn{message.speaker_id, message.text, {message.sequence_index}});
    }
  }
  return turns;
}

std::vector<Round> segment_rounds(std::span<const Turn> turns,
                                  std::string_view role_a) {
  std::vector<Round> rounds;
  auto first_a = std::find_if(turns.begin(), turns.end(), [&](const Turn& t) {
    return t.speaker_id == role_a;
  });
  for (auto it = first_a; it != turns.end() && std::next(it) != turns.end();
       it += 2) {
    const Turn& initiator = *it;
    const Turn& response = *std::next(it);
    if (initiator.speaker_id != role_a || response.speaker_id == role_a) {
      throw Error(ErrorKind::kData, "turns do not alternate speakers");
    }
    rounds.push_back(Round{rounds.size() + 1, initiator, response});
  }
  return rounds;
}

RolePair assign_roles(const RawDialogue& dialogue) {
  std::vector<std::string> speakers;
  for (const Message& message : dialogue.messages) {
    if (std::find(speakers.begin(), speakers.end(), message.speaker_id) ==
        speakers.end()) {
      speakers.push_back(message.speaker_id);
    }
  }
  if (speakers.size() > 2) {
    throw Error(ErrorKind::kData, "multiparty transcript unsupported");
  }
  if (speakers.size() < 2) {
    throw Error(ErrorKind::kData, "dialogue needs exactly two speakers");
  }
  std::string role_a = speakers.front();
  if (dialogue.initiator) {
    if (std::find(speakers.begin(), speakers.end(), *dialogue.initiator) ==
        speakers.end()) {
      throw Error(ErrorKind::kData,
                  "initiator '" + *dialogue.initiator + "' never speaks");
    }
    role_a = *dialogue.initiator;
  }
  std::string role_b = speakers[0] == role_a ? speakers[1] : speakers[0];
  return RolePair{std::move(role_a), std::move(role_b)};
}

Dialogue build_dialogue(const RawDialogue& raw) {
  RolePair roles = assign_roles(raw);
  std::vector<Turn> turns = merge_turns(raw.messages);
  Dialogue dialogue;
  dialogue.dialogue_id = raw.dialogue_id;
  dialogue.rounds = segment_rounds(turns, roles.role_a);
  dialogue.role_a_speaker_id = std::move(roles.role_a);
  dialogue.role_b_speaker_id = std::move(roles.role_b);
  dialogue.label = raw.label;
  dialogue.scam_marker = raw.scam_marker;
  return dialogue;
}

}  // namespace alignscope
