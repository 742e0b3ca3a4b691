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

#ifndef ALIGNSCOPE_STUDY_HPP_
#define ALIGNSCOPE_STUDY_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/dialogue.hpp"
#include "alignscope/hints.hpp"
#include "alignscope/stats.hpp"

namespace alignscope::study {

inline constexpr int kMinConfidence = 1;
inline constexpr int kMaxConfidence = 10;
inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Plan

struct PlannedDialogue {
  std::string dialogue_id;
  Label label = Label::kNonScam;
  std::size_t rounds = 0;
};

struct Assignment {
  std::string participant_id;
  std::string dialogue_id;
  HintCondition condition = HintCondition::kNone;
  std::size_t position = 0;  // 0-based place in the participant's sequence
};

struct StudyPlan {
  std::uint64_t seed = 0;
  std::vector<std::string> participant_ids;
  std::vector<PlannedDialogue> dialogues;
  // Participant-major, each participant's block in presentation order.
  std::vector<Assignment> assignments;
  std::vector<std::string> warnings;

  const Assignment* find(std::string_view participant, std::string_view dialogue) const;
  const PlannedDialogue* dialogue(std::string_view dialogue_id) const;
  std::size_t max_rounds() const;

  // Throws Error(kData) listing the first violated invariant: every
  // participant sees every dialogue once, each condition equally often,
  // ids are unique and positions form 0..D-1.
  void validate() const;
};

// Rotating Latin-square assignment: with dialogues in canonical order
// (scam first, then by id) participant p gets condition (d + p) mod 5 for
// dialogue d. Presentation order is a Fisher-Yates shuffle keyed by the
// seed and the participant id. Throws Error(kData) unless the dialogue
// count is a positive multiple of five.
StudyPlan generate_plan(const std::vector<std::string>& participants,
                        const std::vector<PlannedDialogue>& dialogues, std::uint64_t seed);

nlohmann::json to_json(const StudyPlan& plan);
StudyPlan plan_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Sessions and the event log

enum class EventType { kReveal, kConfidence, kVerdict };
std::string_view to_string(EventType type);

struct StudyEvent {
  std::string ts;
  std::string participant;
  std::string dialogue;
  EventType type = EventType::kReveal;
  std::size_t round = 0;               // reveal, confidence; decision round for verdicts
  std::optional<int> confidence;       // confidence events
  std::optional<Label> verdict;        // verdict events
};

// {ts, participant, dialogue, event: {type, ...}}
nlohmann::json to_json(const StudyEvent& event);
StudyEvent event_from_json(const nlohmann::json& doc);
std::vector<StudyEvent> read_event_log(std::istream& in);

struct RoundEntry {
  std::size_t round = 0;
  std::string revealed_at;
  std::optional<int> confidence;
};

struct SessionRecord {
  std::string participant_id;
  std::string dialogue_id;
  HintCondition condition = HintCondition::kNone;
  std::size_t total_rounds = 0;
  std::vector<RoundEntry> entries;  // one per revealed round, in order
  std::optional<Label> final_verdict;
  std::optional<std::size_t> decision_round;
  std::optional<std::string> completed_at;

  bool closed() const { return final_verdict.has_value(); }
  std::size_t revealed() const { return entries.size(); }
};

// Round-by-round state machine of one (participant, dialogue) review.
// Every accepted call returns the events it produced; rejected calls throw
// and leave the session unchanged.
class ReviewSession {
 public:
  ReviewSession(std::string participant, std::string dialogue, HintCondition condition,
                std::size_t total_rounds);

  // Records `confidence` for the round currently shown (if given) and
  // reveals the next one.
  //   Error(kUsage)  confidence outside 1..10, or given before round 1
  //   Error(kState)  session closed, or every round already revealed
  //                  ("dialogue exhausted, verdict required")
  std::vector<StudyEvent> advance_round(std::optional<int> confidence, const std::string& ts);

  // Closes the session at the last revealed round.
  //   Error(kConflict) already closed; Error(kState) nothing revealed yet
  std::vector<StudyEvent> submit_verdict(Label verdict, std::optional<int> confidence,
                                         const std::string& ts);

  // Re-applies a logged event through the same checks.
  void apply(const StudyEvent& event);

  const SessionRecord& record() const { return record_; }
  std::size_t cursor() const { return record_.entries.size(); }

 private:
  void check_confidence(std::optional<int> confidence) const;
  SessionRecord record_;
};

// Rebuilds every session from an event log in log order. Events for pairs
// not in the plan are a data error.
std::vector<SessionRecord> replay_events(std::span<const StudyEvent> events,
                                         const StudyPlan& plan);

// ---------------------------------------------------------------------------
// Content and round payloads

struct StudyDialogue {
  Dialogue dialogue;
  Trajectory trajectory;
};

struct RoundPayload {
  std::size_t round = 0;
  std::size_t total_rounds = 0;
  std::string initiator_text;
  std::string response_text;
  HintPacket hint;
};

RoundPayload make_payload(const StudyDialogue& content, HintCondition condition,
                          std::size_t round, const KeywordLexicon& lexicon,
                          const HintSettings& settings);

nlohmann::json to_json(const RoundPayload& payload);

// ---------------------------------------------------------------------------
// Report

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// "scam" is the positive class. Undefined ratios stay empty and add a flag
// ("precision_undefined", "recall_undefined", "f1_undefined").
struct Metrics {
  ConfusionCounts counts;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::vector<std::string> flags;
};

Metrics compute_metrics(const ConfusionCounts& counts);

struct ConfidencePoint {
  std::size_t round = 0;
  std::optional<double> mean;
  std::optional<double> ci_half;
  std::size_t n = 0;
};

enum class ConfidenceAggregator { kMean, kFinalRound };
std::string_view to_string(ConfidenceAggregator aggregator);
std::optional<ConfidenceAggregator> parse_aggregator(std::string_view name);

struct ConditionTestOutcome {
  std::string metric_name;
  std::optional<stats::ConditionTestResult> result;
  std::size_t participants_used = 0;
  std::optional<std::string> skipped_reason;
};

struct StudyReport {
  std::uint64_t plan_seed = 0;
  std::size_t planned_sessions = 0;
  std::size_t closed_sessions = 0;
  std::size_t open_sessions = 0;
  std::vector<std::string> warnings;
  ConfidenceAggregator aggregator = ConfidenceAggregator::kMean;
  std::array<Metrics, 5> per_condition;
  std::map<std::string, std::array<Metrics, 5>> per_participant;
  std::array<std::vector<ConfidencePoint>, 5> confidence;  // rounds 1..max_rounds
  std::vector<ConditionTestOutcome> condition_tests;
};

// Metrics over closed sessions; confidence trajectories over every session
// that reported a confidence at that round (sessions that already decided
// drop out). Condition tests run on per-participant aggregates with
// complete rows only. Records without any revealed round are ignored, and
// the result does not depend on record order.
StudyReport compute_report(std::span<const SessionRecord> records, const StudyPlan& plan,
                           ConfidenceAggregator aggregator = ConfidenceAggregator::kMean);

nlohmann::json to_json(const StudyReport& report);
// Canonical text form (pretty JSON plus trailing newline) shared by the
// live service and offline regeneration.
std::string render_report(const StudyReport& report);
// One line per condition: condition,precision,recall,f1,tp,fp,fn,tn
void write_condition_csv(std::ostream& out, const StudyReport& report);

}  // namespace alignscope::study

#endif  // ALIGNSCOPE_STUDY_HPP_
