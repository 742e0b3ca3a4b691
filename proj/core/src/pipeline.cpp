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

#include "alignscope/pipeline.hpp"

#include <map>
#include <ostream>
#include <set>

#include "alignscope/error.hpp"
#include "parallel.hpp"

namespace alignscope {

std::string_view to_string(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kNoMarkerAnnotation: return "no_financial_request_annotated";
    case ExclusionReason::kInsufficientRounds: return "fewer_than_k_rounds";
    case ExclusionReason::kMultiparty: return "multiparty_transcript_unsupported";
    case ExclusionReason::kInvalidDialogue: return "invalid_dialogue";
    case ExclusionReason::kDuplicateId: return "duplicate_dialogue_id";
  }
  return "?";
}

Screened<RawDialogue> truncate_at_marker(const RawDialogue& dialogue) {
  if (!dialogue.scam_marker) {
    if (dialogue.label == Label::kScam) {
      return Screened<RawDialogue>::drop(ExclusionReason::kNoMarkerAnnotation,
                                         "no financial request annotated");
    }
    return Screened<RawDialogue>::keep(dialogue);
  }
  RawDialogue truncated = dialogue;
  truncated.messages.clear();
  for (const Message& message : dialogue.messages) {
    if (message.sequence_index < *dialogue.scam_marker) truncated.messages.push_back(message);
  }
  return Screened<RawDialogue>::keep(std::move(truncated));
}

Screened<std::vector<Round>> window_last_rounds(std::span<const Round> rounds,
                                                std::size_t k) {
  if (k < 1) throw Error(ErrorKind::kConfig, "window must be at least 1 round");
  if (rounds.size() < k) {
    return Screened<std::vector<Round>>::drop(
        ExclusionReason::kInsufficientRounds,
        "fewer than " + std::to_string(k) + " rounds (" + std::to_string(rounds.size()) + ")");
  }
  std::vector<Round> window(rounds.end() - static_cast<std::ptrdiff_t>(k), rounds.end());
  for (std::size_t i = 0; i < window.size(); ++i) window[i].index = i + 1;
  return Screened<std::vector<Round>>::keep(std::move(window));
}

std::size_t CorpusManifest::included_count() const {
  std::size_t count = 0;
  for (const ManifestEntry& entry : dialogues) count += entry.included ? 1 : 0;
  return count;
}

PreparedDialogue prepare_dialogue(const RawDialogue& raw, const MarkerAnnotations& annotations,
                                  std::size_t window_rounds) {
  PreparedDialogue prepared;
  ManifestEntry& entry = prepared.entry;
  entry.dialogue_id = raw.dialogue_id;
  entry.input_messages = raw.messages.size();

  RawDialogue annotated = raw;
  if (auto it = annotations.find(raw.dialogue_id); it != annotations.end()) {
    annotated.scam_marker = it->second;
  }
  Screened<RawDialogue> truncated = truncate_at_marker(annotated);
  if (!truncated.value) {
    entry.exclusion = truncated.exclusion;
    entry.messages_before_marker = entry.input_messages;
    return prepared;
  }
  entry.messages_before_marker = truncated.value->messages.size();

  Dialogue dialogue;
  try {
    if (truncated.value->messages.empty()) {
      dialogue.dialogue_id = raw.dialogue_id;
    } else {
      dialogue = build_dialogue(*truncated.value);
    }
  } catch (const Error& e) {
    const bool multiparty = std::string_view(e.what()) == "multiparty transcript unsupported";
    entry.exclusion = Exclusion{
        multiparty ? ExclusionReason::kMultiparty : ExclusionReason::kInvalidDialogue, e.what()};
    return prepared;
  }
  entry.rounds_available = dialogue.rounds.size();

  Screened<std::vector<Round>> window = window_last_rounds(dialogue.rounds, window_rounds);
  if (!window.value) {
    entry.exclusion = window.exclusion;
    return prepared;
  }
  dialogue.rounds = std::move(*window.value);
  entry.included = true;
  entry.window_turns = 2 * dialogue.rounds.size();
  for (const Round& round : dialogue.rounds) {
    entry.window_messages +=
        round.initiator.source_indices.size() + round.response.source_indices.size();
  }
  prepared.windowed = std::move(dialogue);
  return prepared;
}

MeanTrajectory aggregate_mean_trajectory(std::span<const Trajectory> trajectories) {
  MeanTrajectory aggregate;
  aggregate.n_dialogues = trajectories.size();
  if (trajectories.empty()) return aggregate;
  const std::size_t length = trajectories.front().scores.size();
  for (const Trajectory& t : trajectories) {
    if (t.scores.size() != length) {
      throw Error(ErrorKind::kData, "trajectories differ in length ('" + t.dialogue_id + "')");
    }
  }
  aggregate.rounds.resize(length);
  std::vector<double> values(trajectories.size());
  for (std::size_t r = 0; r < length; ++r) {
    for (std::size_t s = 0; s < kAllScores.size(); ++s) {
      for (std::size_t d = 0; d < trajectories.size(); ++d) {
        values[d] = trajectories[d].scores[r].get(kAllScores[s]);
      }
      aggregate.rounds[r][s] = stats::mean_ci95(values);
    }
  }
  return aggregate;
}

void write_aggregate_csv(std::ostream& out, const MeanTrajectory& aggregate) {
  out << kAggregateCsvHeader << '\n';
  for (std::size_t r = 0; r < aggregate.rounds.size(); ++r) {
    for (std::size_t s = 0; s < kAllScores.size(); ++s) {
      const stats::MeanCi& ci = aggregate.rounds[r][s];
      out << (r + 1) << ',' << to_string(kAllScores[s]) << ',' << format_score(ci.mean) << ','
          << (ci.half_width ? format_score(*ci.half_width) : std::string()) << ',' << ci.n
          << '\n';
    }
  }
}

PipelineResult run_pipeline(std::span<const RawDialogue> corpus,
                            const MarkerAnnotations& annotations, const RunConfig& config,
                            std::string corpus_id) {
  config.validate();
  const AlignmentEngine engine(make_default_providers(config.providers), config.alpha);

  std::vector<PreparedDialogue> prepared(corpus.size());
  std::vector<std::optional<Trajectory>> scored(corpus.size());
  std::set<std::string> seen;
  std::vector<bool> duplicate(corpus.size(), false);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    duplicate[i] = !seen.insert(corpus[i].dialogue_id).second;
  }
  detail::parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    if (duplicate[i]) {
      prepared[i].entry.dialogue_id = corpus[i].dialogue_id;
      prepared[i].entry.input_messages = corpus[i].messages.size();
      prepared[i].entry.exclusion =
          Exclusion{ExclusionReason::kDuplicateId, "dialogue id already seen earlier"};
      return;
    }
    prepared[i] = prepare_dialogue(corpus[i], annotations, config.window_rounds);
    if (prepared[i].windowed) scored[i] = engine.score_dialogue(*prepared[i].windowed);
  });

  PipelineResult result;
  result.manifest.corpus_id = std::move(corpus_id);
  result.manifest.window_rounds = config.window_rounds;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    result.manifest.dialogues.push_back(std::move(prepared[i].entry));
    if (scored[i]) result.trajectories.push_back(std::move(*scored[i]));
  }
  result.aggregate = aggregate_mean_trajectory(result.trajectories);
  return result;
}

nlohmann::json manifest_to_json(const CorpusManifest& manifest, const RunConfig& config) {
  nlohmann::json dialogues = nlohmann::json::array();
  std::map<std::string, std::size_t> by_reason;
  for (const ManifestEntry& entry : manifest.dialogues) {
    nlohmann::json item = {
        {"dialogue_id", entry.dialogue_id},
        {"status", entry.included ? "included" : "excluded"},
        {"input_messages", entry.input_messages},
        {"messages_before_marker", entry.messages_before_marker},
        {"rounds_available", entry.rounds_available},
    };
    if (entry.included) {
      item["window_turns"] = entry.window_turns;
      item["window_messages"] = entry.window_messages;
    }
    if (entry.exclusion) {
      const std::string code(to_string(entry.exclusion->reason));
      item["reason"] = code;
      item["detail"] = entry.exclusion->detail;
      ++by_reason[code];
    }
    dialogues.push_back(std::move(item));
  }
  const std::size_t included = manifest.included_count();
  return {
      {"schema_version", 1},
      {"corpus_id", manifest.corpus_id},
      {"window_rounds", manifest.window_rounds},
      {"counts",
       {{"input", manifest.dialogues.size()},
        {"included", included},
        {"excluded", manifest.dialogues.size() - included},
        {"by_reason", by_reason}}},
      {"ci_method", "student_t_two_sided_95"},
      {"run_config", to_json(config)},
      {"dialogues", std::move(dialogues)},
  };
}

std::string dialogue_file_stem(std::string_view dialogue_id) {
  std::string stem;
  for (char c : dialogue_id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    stem.push_back(safe ? c : '_');
  }
  if (stem.empty() || stem.front() == '.') stem.insert(stem.begin(), '_');
  return stem;
}

}  // namespace alignscope
