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

#include <istream>
#include <map>

#include "alignscope/error.hpp"
#include "alignscope/study.hpp"

namespace alignscope::study {

std::string_view to_string(EventType type) {
  switch (type) {
    case EventType::kReveal: return "reveal";
    case EventType::kConfidence: return "confidence";
    case EventType::kVerdict: return "verdict";
  }
  return "?";
}

nlohmann::json to_json(const StudyEvent& event) {
  nlohmann::json body = {{"type", std::string(to_string(event.type))}};
  switch (event.type) {
    case EventType::kReveal:
      body["round"] = event.round;
      break;
    case EventType::kConfidence:
      body["round"] = event.round;
      body["value"] = event.confidence.value_or(0);
      break;
    case EventType::kVerdict:
      body["verdict"] = std::string(to_string(event.verdict.value_or(Label::kNonScam)));
      body["decision_round"] = event.round;
      break;
  }
  return {{"ts", event.ts},
          {"participant", event.participant},
          {"dialogue", event.dialogue},
          {"event", std::move(body)}};
}

StudyEvent event_from_json(const nlohmann::json& doc) {
  StudyEvent event;
  try {
    event.ts = doc.at("ts").get<std::string>();
    event.participant = doc.at("participant").get<std::string>();
    event.dialogue = doc.at("dialogue").get<std::string>();
    const nlohmann::json& body = doc.at("event");
    const std::string type = body.at("type").get<std::string>();
    if (type == "reveal") {
      event.type = EventType::kReveal;
      event.round = body.at("round").get<std::size_t>();
    } else if (type == "confidence") {
      event.type = EventType::kConfidence;
      event.round = body.at("round").get<std::size_t>();
      event.confidence = body.at("value").get<int>();
    } else if (type == "verdict") {
      event.type = EventType::kVerdict;
      event.round = body.at("decision_round").get<std::size_t>();
      event.verdict = parse_label(body.at("verdict").get<std::string>());
      if (!event.verdict) throw Error(ErrorKind::kData, "event log: unknown verdict");
    } else {
      throw Error(ErrorKind::kData, "event log: unknown event type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kData, std::string("event log: ") + e.what());
  }
  return event;
}

std::vector<StudyEvent> read_event_log(std::istream& in) {
  std::vector<StudyEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      throw Error(ErrorKind::kData, "event log line " + std::to_string(line_no) + " is not JSON");
    }
    events.push_back(event_from_json(doc));
  }
  return events;
}

ReviewSession::ReviewSession(std::string participant, std::string dialogue,
                             HintCondition condition, std::size_t total_rounds) {
  record_.participant_id = std::move(participant);
  record_.dialogue_id = std::move(dialogue);
  record_.condition = condition;
  record_.total_rounds = total_rounds;
}

void ReviewSession::check_confidence(std::optional<int> confidence) const {
  if (!confidence) return;
  if (*confidence < kMinConfidence || *confidence > kMaxConfidence) {
    throw Error(ErrorKind::kUsage, "confidence must be an integer in 1..10");
  }
  if (record_.entries.empty()) {
    throw Error(ErrorKind::kUsage, "no round has been revealed to rate yet");
  }
}

std::vector<StudyEvent> ReviewSession::advance_round(std::optional<int> confidence,
                                                     const std::string& ts) {
  if (record_.closed()) throw Error(ErrorKind::kState, "session is closed");
  check_confidence(confidence);
  if (record_.entries.size() >= record_.total_rounds) {
    throw Error(ErrorKind::kState, "dialogue exhausted, verdict required");
  }
  std::vector<StudyEvent> events;
  if (confidence) {
    record_.entries.back().confidence = confidence;
    events.push_back(StudyEvent{ts, record_.participant_id, record_.dialogue_id,
                                EventType::kConfidence, record_.entries.size(), confidence,
                                std::nullopt});
  }
  const std::size_t round = record_.entries.size() + 1;
  record_.entries.push_back(RoundEntry{round, ts, std::nullopt});
  events.push_back(StudyEvent{ts, record_.participant_id, record_.dialogue_id,
                              EventType::kReveal, round, std::nullopt, std::nullopt});
  return events;
}

std::vector<StudyEvent> ReviewSession::submit_verdict(Label verdict,
                                                      std::optional<int> confidence,
                                                      const std::string& ts) {
  if (record_.closed()) throw Error(ErrorKind::kConflict, "verdict already submitted");
  if (record_.entries.empty()) {
    throw Error(ErrorKind::kState, "reveal at least one round before a verdict");
  }
  check_confidence(confidence);
  std::vector<StudyEvent> events;
  if (confidence) {
    record_.entries.back().confidence = confidence;
    events.push_back(StudyEvent{ts, record_.participant_id, record_.dialogue_id,
                                EventType::kConfidence, record_.entries.size(), confidence,
                                std::nullopt});
  }
  record_.final_verdict = verdict;
  record_.decision_round = record_.entries.size();
  record_.completed_at = ts;
  events.push_back(StudyEvent{ts, record_.participant_id, record_.dialogue_id,
                              EventType::kVerdict, record_.entries.size(), std::nullopt,
                              verdict});
  return events;
}

void ReviewSession::apply(const StudyEvent& event) {
  auto mismatch = [&](const std::string& what) {
    throw Error(ErrorKind::kData, "event log: " + what + " for (" + event.participant + ", " +
                                      event.dialogue + ") does not follow the session state");
  };
  switch (event.type) {
    case EventType::kReveal:
      if (record_.closed() || event.round != record_.entries.size() + 1 ||
          event.round > record_.total_rounds) {
        mismatch("reveal of round " + std::to_string(event.round));
      }
      record_.entries.push_back(RoundEntry{event.round, event.ts, std::nullopt});
      break;
    case EventType::kConfidence:
      if (record_.closed() || record_.entries.empty() ||
          event.round != record_.entries.size()) {
        mismatch("confidence");
      }
      check_confidence(event.confidence);
      record_.entries.back().confidence = event.confidence;
      break;
    case EventType::kVerdict:
      if (record_.closed() || record_.entries.empty() ||
          event.round != record_.entries.size()) {
        mismatch("verdict");
      }
      record_.final_verdict = event.verdict;
      record_.decision_round = event.round;
      record_.completed_at = event.ts;
      break;
  }
}

std::vector<SessionRecord> replay_events(std::span<const StudyEvent> events,
                                         const StudyPlan& plan) {
  std::vector<ReviewSession> sessions;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const StudyEvent& event : events) {
    const auto key = std::pair{event.participant, event.dialogue};
    auto it = index.find(key);
    if (it == index.end()) {
      const Assignment* assignment = plan.find(event.participant, event.dialogue);
      const PlannedDialogue* planned = plan.dialogue(event.dialogue);
      if (assignment == nullptr || planned == nullptr) {
        throw Error(ErrorKind::kData, "event log: (" + event.participant + ", " +
                                          event.dialogue + ") is not in the study plan");
      }
      it = index.emplace(key, sessions.size()).first;
      sessions.emplace_back(event.participant, event.dialogue, assignment->condition,
                            planned->rounds);
    }
    sessions[it->second].apply(event);
  }
  std::vector<SessionRecord> records;
  records.reserve(sessions.size());
  for (const ReviewSession& session : sessions) records.push_back(session.record());
  return records;
}

RoundPayload make_payload(const StudyDialogue& content, HintCondition condition,
                          std::size_t round, const KeywordLexicon& lexicon,
                          const HintSettings& settings) {
  const Round& r = content.dialogue.rounds.at(round - 1);
  RoundPayload payload;
  payload.round = round;
  payload.total_rounds = content.dialogue.rounds.size();
  payload.initiator_text = r.initiator.text;
  payload.response_text = r.response.text;
  payload.hint = build_hint(condition, content.trajectory.scores, round,
                            RoundText{r.initiator.text, r.response.text}, lexicon, settings);
  return payload;
}

nlohmann::json to_json(const RoundPayload& payload) {
  return {{"round", payload.round},
          {"total_rounds", payload.total_rounds},
          {"messages",
           {{{"role", "A"}, {"text", payload.initiator_text}},
            {{"role", "B"}, {"text", payload.response_text}}}},
          {"hint_packet", to_json(payload.hint)}};
}

}  // namespace alignscope::study
