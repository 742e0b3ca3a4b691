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

#include <algorithm>
#include <random>
#include <set>

#include "alignscope/error.hpp"
#include "alignscope/study.hpp"

namespace alignscope::study {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t participant_key(std::uint64_t seed, std::string_view participant) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : participant) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix(seed ^ mix(h));
}

// Unbiased draw from [0, bound) that does not depend on the standard
// library's distribution implementation.
std::size_t draw_below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t value = rng();
  while (value >= limit) value = rng();
  return static_cast<std::size_t>(value % bound);
}

}  // namespace

const Assignment* StudyPlan::find(std::string_view participant,
                                  std::string_view dialogue) const {
  for (const Assignment& a : assignments) {
    if (a.participant_id == participant && a.dialogue_id == dialogue) return &a;
  }
  return nullptr;
}

const PlannedDialogue* StudyPlan::dialogue(std::string_view dialogue_id) const {
  for (const PlannedDialogue& d : dialogues) {
    if (d.dialogue_id == dialogue_id) return &d;
  }
  return nullptr;
}

std::size_t StudyPlan::max_rounds() const {
  std::size_t rounds = 0;
  for (const PlannedDialogue& d : dialogues) rounds = std::max(rounds, d.rounds);
  return rounds;
}

void StudyPlan::validate() const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorKind::kData, "invalid study plan: " + message);
  };
  if (participant_ids.empty()) fail("no participants");
  if (dialogues.empty()) fail("no dialogues");
  std::set<std::string> participants(participant_ids.begin(), participant_ids.end());
  if (participants.size() != participant_ids.size()) fail("duplicate participant id");
  std::set<std::string> dialogue_ids;
  for (const PlannedDialogue& d : dialogues) {
    if (!dialogue_ids.insert(d.dialogue_id).second) fail("duplicate dialogue id " + d.dialogue_id);
    if (d.rounds == 0) fail("dialogue " + d.dialogue_id + " has no rounds");
  }
  if (dialogues.size() % kAllConditions.size() != 0) {
    fail("dialogue count is not a multiple of the five conditions");
  }
  if (assignments.size() != participant_ids.size() * dialogues.size()) {
    fail("every participant must be assigned every dialogue exactly once");
  }
  std::set<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::array<std::size_t, 5>> condition_counts;
  std::map<std::string, std::set<std::size_t>> positions;
  for (const Assignment& a : assignments) {
    if (!participants.contains(a.participant_id)) fail("unknown participant " + a.participant_id);
    if (!dialogue_ids.contains(a.dialogue_id)) fail("unknown dialogue " + a.dialogue_id);
    if (!pairs.emplace(a.participant_id, a.dialogue_id).second) {
      fail("pair (" + a.participant_id + ", " + a.dialogue_id + ") assigned twice");
    }
    ++condition_counts[a.participant_id][condition_index(a.condition)];
    if (a.position >= dialogues.size() || !positions[a.participant_id].insert(a.position).second) {
      fail("participant " + a.participant_id + " has an invalid presentation order");
    }
  }
  const std::size_t per_condition = dialogues.size() / kAllConditions.size();
  for (const auto& [participant, counts] : condition_counts) {
    for (std::size_t c : counts) {
      if (c != per_condition) fail("participant " + participant + " is not condition-balanced");
    }
  }
}

StudyPlan generate_plan(const std::vector<std::string>& participants,
                        const std::vector<PlannedDialogue>& dialogues, std::uint64_t seed) {
  const std::size_t k = kAllConditions.size();
  if (dialogues.empty() || dialogues.size() % k != 0) {
    throw Error(ErrorKind::kData, "dialogue count must be a positive multiple of " +
                                      std::to_string(k) + " (got " +
                                      std::to_string(dialogues.size()) + ")");
  }
  if (participants.empty()) throw Error(ErrorKind::kData, "no participants");

  StudyPlan plan;
  plan.seed = seed;
  plan.participant_ids = participants;
  plan.dialogues = dialogues;
  std::stable_sort(plan.dialogues.begin(), plan.dialogues.end(),
                   [](const PlannedDialogue& a, const PlannedDialogue& b) {
                     if (a.label != b.label) return a.label == Label::kScam;
                     return a.dialogue_id < b.dialogue_id;
                   });
  const auto scams = std::count_if(plan.dialogues.begin(), plan.dialogues.end(),
                                   [](const PlannedDialogue& d) { return d.label == Label::kScam; });
  if (static_cast<std::size_t>(scams) * 2 != plan.dialogues.size()) {
    plan.warnings.push_back("scam and non-scam dialogue counts are unbalanced (" +
                            std::to_string(scams) + " scam of " +
                            std::to_string(plan.dialogues.size()) + ")");
  }

  for (std::size_t p = 0; p < participants.size(); ++p) {
    std::vector<std::size_t> order(plan.dialogues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(participant_key(seed, participants[p]));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[draw_below(rng, i)]);
    }
    for (std::size_t position = 0; position < order.size(); ++position) {
      const std::size_t d = order[position];
      plan.assignments.push_back(Assignment{participants[p], plan.dialogues[d].dialogue_id,
                                            kAllConditions[(d + p) % k], position});
    }
  }
  plan.validate();
  return plan;
}

nlohmann::json to_json(const StudyPlan& plan) {
  nlohmann::json dialogues = nlohmann::json::array();
  for (const PlannedDialogue& d : plan.dialogues) {
    dialogues.push_back({{"dialogue_id", d.dialogue_id},
                         {"label", std::string(to_string(d.label))},
                         {"rounds", d.rounds}});
  }
  nlohmann::json assignments = nlohmann::json::array();
  for (const Assignment& a : plan.assignments) {
    assignments.push_back({{"participant", a.participant_id},
                           {"dialogue", a.dialogue_id},
                           {"condition", std::string(to_string(a.condition))},
                           {"position", a.position}});
  }
  return {{"schema_version", 1},
          {"seed", plan.seed},
          {"participants", plan.participant_ids},
          {"dialogues", std::move(dialogues)},
          {"assignments", std::move(assignments)},
          {"warnings", plan.warnings}};
}

StudyPlan plan_from_json(const nlohmann::json& doc) {
  StudyPlan plan;
  try {
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.participant_ids = doc.at("participants").get<std::vector<std::string>>();
    for (const auto& d : doc.at("dialogues")) {
      PlannedDialogue planned;
      planned.dialogue_id = d.at("dialogue_id").get<std::string>();
      const auto label = parse_label(d.at("label").get<std::string>());
      if (!label) throw Error(ErrorKind::kData, "plan dialogue has an unknown label");
      planned.label = *label;
      planned.rounds = d.at("rounds").get<std::size_t>();
      plan.dialogues.push_back(std::move(planned));
    }
    for (const auto& a : doc.at("assignments")) {
      Assignment assignment;
      assignment.participant_id = a.at("participant").get<std::string>();
      assignment.dialogue_id = a.at("dialogue").get<std::string>();
      const auto condition = parse_condition(a.at("condition").get<std::string>());
      if (!condition) throw Error(ErrorKind::kData, "plan assignment has an unknown condition");
      assignment.condition = *condition;
      assignment.position = a.at("position").get<std::size_t>();
      plan.assignments.push_back(std::move(assignment));
    }
    if (auto it = doc.find("warnings"); it != doc.end()) {
      plan.warnings = it->get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kData, std::string("invalid study plan: ") + e.what());
  }
  return plan;
}

}  // namespace alignscope::study
