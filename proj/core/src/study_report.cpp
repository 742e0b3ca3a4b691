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
#include <ostream>
#include <tuple>

#include "alignscope/error.hpp"
#include "alignscope/study.hpp"

namespace alignscope::study {

Metrics compute_metrics(const ConfusionCounts& counts) {
  Metrics m;
  m.counts = counts;
  const double tp = static_cast<double>(counts.tp);
  if (counts.tp + counts.fp > 0) {
    m.precision = tp / static_cast<double>(counts.tp + counts.fp);
  } else {
    m.flags.emplace_back("precision_undefined");
  }
  if (counts.tp + counts.fn > 0) {
    m.recall = tp / static_cast<double>(counts.tp + counts.fn);
  } else {
    m.flags.emplace_back("recall_undefined");
  }
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  } else {
    m.flags.emplace_back("f1_undefined");
  }
  return m;
}

std::string_view to_string(ConfidenceAggregator aggregator) {
  return aggregator == ConfidenceAggregator::kMean ? "mean" : "final_round";
}

std::optional<ConfidenceAggregator> parse_aggregator(std::string_view name) {
  if (name == "mean") return ConfidenceAggregator::kMean;
  if (name == "final_round" || name == "final-round") return ConfidenceAggregator::kFinalRound;
  return std::nullopt;
}

namespace {

void tally(ConfusionCounts& counts, Label truth, Label verdict) {
  if (truth == Label::kScam) {
    (verdict == Label::kScam ? counts.tp : counts.fn) += 1;
  } else {
    (verdict == Label::kScam ? counts.fp : counts.tn) += 1;
  }
}

std::optional<double> aggregate_confidence(const std::vector<const SessionRecord*>& sessions,
                                           ConfidenceAggregator aggregator) {
  std::vector<double> values;
  for (const SessionRecord* record : sessions) {
    if (aggregator == ConfidenceAggregator::kMean) {
      for (const RoundEntry& entry : record->entries) {
        if (entry.confidence) values.push_back(*entry.confidence);
      }
    } else {
      for (auto it = record->entries.rbegin(); it != record->entries.rend(); ++it) {
        if (it->confidence) {
          values.push_back(*it->confidence);
          break;
        }
      }
    }
  }
  if (values.empty()) return std::nullopt;
  return stats::mean(values);
}

nlohmann::json nullable(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json metrics_json(HintCondition condition, const Metrics& m) {
  return {{"condition", std::string(to_string(condition))},
          {"hint", condition_index(condition)},
          {"precision", nullable(m.precision)},
          {"recall", nullable(m.recall)},
          {"f1", nullable(m.f1)},
          {"tp", m.counts.tp},
          {"fp", m.counts.fp},
          {"fn", m.counts.fn},
          {"tn", m.counts.tn},
          {"flags", m.flags}};
}

}  // namespace

StudyReport compute_report(std::span<const SessionRecord> records, const StudyPlan& plan,
                           ConfidenceAggregator aggregator) {
  StudyReport report;
  report.plan_seed = plan.seed;
  report.aggregator = aggregator;
  report.planned_sessions = plan.assignments.size();

  std::array<ConfusionCounts, 5> condition_counts{};
  std::map<std::string, std::array<ConfusionCounts, 5>> participant_counts;
  std::map<std::string, std::array<std::vector<const SessionRecord*>, 5>> participant_sessions;
  for (const std::string& p : plan.participant_ids) {
    participant_counts[p] = {};
    participant_sessions[p] = {};
  }

  // Canonical order keeps floating-point sums independent of how the
  // records were collected. Sessions that never revealed a round carry no
  // data and are not counted.
  std::vector<const SessionRecord*> started;
  for (const SessionRecord& record : records) {
    if (!record.entries.empty()) started.push_back(&record);
  }
  std::sort(started.begin(), started.end(), [](const SessionRecord* a, const SessionRecord* b) {
    return std::tie(a->participant_id, a->dialogue_id) <
           std::tie(b->participant_id, b->dialogue_id);
  });

  for (const SessionRecord* record_ptr : started) {
    const SessionRecord& record = *record_ptr;
    const Assignment* assignment = plan.find(record.participant_id, record.dialogue_id);
    const PlannedDialogue* planned = plan.dialogue(record.dialogue_id);
    if (assignment == nullptr || planned == nullptr) {
      throw Error(ErrorKind::kData, "session (" + record.participant_id + ", " +
                                        record.dialogue_id + ") is not in the study plan");
    }
    const std::size_t c = condition_index(record.condition);
    participant_sessions[record.participant_id][c].push_back(&record);
    if (!record.closed()) {
      ++report.open_sessions;
      continue;
    }
    ++report.closed_sessions;
    tally(condition_counts[c], planned->label, *record.final_verdict);
    tally(participant_counts[record.participant_id][c], planned->label, *record.final_verdict);
  }
  if (report.closed_sessions < report.planned_sessions) {
    report.warnings.push_back("partial report: " + std::to_string(report.closed_sessions) +
                              " of " + std::to_string(report.planned_sessions) +
                              " planned sessions closed");
  }

  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    report.per_condition[c] = compute_metrics(condition_counts[c]);
  }
  for (const auto& [participant, counts] : participant_counts) {
    auto& row = report.per_participant[participant];
    for (std::size_t c = 0; c < kAllConditions.size(); ++c) row[c] = compute_metrics(counts[c]);
  }

  const std::size_t max_rounds = plan.max_rounds();
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    for (std::size_t r = 1; r <= max_rounds; ++r) {
      std::vector<double> values;
      for (const SessionRecord* record : started) {
        if (condition_index(record->condition) != c || record->entries.size() < r) continue;
        if (const auto& conf = record->entries[r - 1].confidence) values.push_back(*conf);
      }
      ConfidencePoint point;
      point.round = r;
      point.n = values.size();
      if (!values.empty()) {
        const stats::MeanCi ci = stats::mean_ci95(values);
        point.mean = ci.mean;
        point.ci_half = ci.half_width;
      }
      report.confidence[c].push_back(point);
    }
  }

  using Extractor = std::function<std::optional<double>(const std::string&, std::size_t)>;
  const std::vector<std::pair<std::string, Extractor>> metrics = {
      {"precision",
       [&](const std::string& p, std::size_t c) { return report.per_participant[p][c].precision; }},
      {"recall",
       [&](const std::string& p, std::size_t c) { return report.per_participant[p][c].recall; }},
      {"f1", [&](const std::string& p, std::size_t c) { return report.per_participant[p][c].f1; }},
      {"confidence",
       [&](const std::string& p, std::size_t c) {
         return aggregate_confidence(participant_sessions[p][c], aggregator);
       }},
  };
  std::vector<std::string> names;
  for (HintCondition condition : kAllConditions) names.emplace_back(to_string(condition));
  for (const auto& [name, extract] : metrics) {
    ConditionTestOutcome outcome;
    outcome.metric_name = name;
    std::vector<std::vector<double>> matrix;
    for (const std::string& participant : plan.participant_ids) {
      std::vector<double> row;
      for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
        if (auto value = extract(participant, c)) row.push_back(*value);
      }
      if (row.size() == kAllConditions.size()) matrix.push_back(std::move(row));
    }
    outcome.participants_used = matrix.size();
    if (matrix.size() >= 2) {
      outcome.result = stats::condition_tests(name, matrix, names);
    } else {
      outcome.skipped_reason = "fewer than two participants with values in every condition";
    }
    report.condition_tests.push_back(std::move(outcome));
  }
  return report;
}

nlohmann::json to_json(const StudyReport& report) {
  nlohmann::json conditions = nlohmann::json::array();
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    conditions.push_back(metrics_json(kAllConditions[c], report.per_condition[c]));
  }
  nlohmann::json participants = nlohmann::json::object();
  for (const auto& [participant, row] : report.per_participant) {
    nlohmann::json items = nlohmann::json::array();
    for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
      items.push_back(metrics_json(kAllConditions[c], row[c]));
    }
    participants[participant] = std::move(items);
  }
  nlohmann::json trajectories = nlohmann::json::object();
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    nlohmann::json points = nlohmann::json::array();
    for (const ConfidencePoint& point : report.confidence[c]) {
      points.push_back({{"round", point.round},
                        {"mean", nullable(point.mean)},
                        {"ci_half", nullable(point.ci_half)},
                        {"n", point.n}});
    }
    trajectories[std::string(to_string(kAllConditions[c]))] = std::move(points);
  }
  nlohmann::json tests = nlohmann::json::array();
  for (const ConditionTestOutcome& outcome : report.condition_tests) {
    nlohmann::json item = outcome.result ? stats::to_json(*outcome.result)
                                         : nlohmann::json{{"metric_name", outcome.metric_name}};
    item["participants_used"] = outcome.participants_used;
    if (outcome.skipped_reason) item["skipped_reason"] = *outcome.skipped_reason;
    tests.push_back(std::move(item));
  }
  return {{"schema_version", kReportSchemaVersion},
          {"plan_seed", report.plan_seed},
          {"positive_class", "scam"},
          {"completeness",
           {{"planned", report.planned_sessions},
            {"closed", report.closed_sessions},
            {"open", report.open_sessions}}},
          {"warnings", report.warnings},
          {"confidence_aggregator", std::string(to_string(report.aggregator))},
          {"confidence_averaging", "decision_censored"},
          {"ci_method", "student_t_two_sided_95"},
          {"conditions", std::move(conditions)},
          {"per_participant", std::move(participants)},
          {"confidence_trajectories", std::move(trajectories)},
          {"condition_tests", std::move(tests)}};
}

std::string render_report(const StudyReport& report) { return to_json(report).dump(2) + "\n"; }

void write_condition_csv(std::ostream& out, const StudyReport& report) {
  auto cell = [](const std::optional<double>& v) { return v ? format_score(*v) : std::string(); };
  out << "condition,hint,precision,recall,f1,tp,fp,fn,tn\n";
  for (std::size_t c = 0; c < kAllConditions.size(); ++c) {
    const Metrics& m = report.per_condition[c];
    out << to_string(kAllConditions[c]) << ',' << c << ',' << cell(m.precision) << ','
        << cell(m.recall) << ',' << cell(m.f1) << ',' << m.counts.tp << ',' << m.counts.fp << ','
        << m.counts.fn << ',' << m.counts.tn << '\n';
  }
}

}  // namespace alignscope::study
