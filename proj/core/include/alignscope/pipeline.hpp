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

#ifndef ALIGNSCOPE_PIPELINE_HPP_
#define ALIGNSCOPE_PIPELINE_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/corpus_io.hpp"
#include "alignscope/dialogue.hpp"
#include "alignscope/run_config.hpp"
#include "alignscope/stats.hpp"

namespace alignscope {

enum class ExclusionReason {
  kNoMarkerAnnotation,   // scam-labelled dialogue without a first-request marker
  kInsufficientRounds,   // fewer than window_rounds rounds before the marker
  kMultiparty,           // more than two speakers
  kInvalidDialogue,      // roles cannot be assigned or turns do not alternate
  kDuplicateId,
};

std::string_view to_string(ExclusionReason reason);

struct Exclusion {
  ExclusionReason reason;
  std::string detail;
};

// Either a value or the reason the dialogue leaves the analysis.
template <typename T>
struct Screened {
  std::optional<T> value;
  std::optional<Exclusion> exclusion;

  static Screened keep(T v) { return Screened{std::move(v), std::nullopt}; }
  static Screened drop(ExclusionReason reason, std::string detail) {
    return Screened{std::nullopt, Exclusion{reason, std::move(detail)}};
  }
};

// Removes every message at or after the scam marker. Dialogues without a
// marker pass through unchanged unless labelled scam, which excludes them.
Screened<RawDialogue> truncate_at_marker(const RawDialogue& dialogue);

// Keeps the last k rounds, re-indexed 1..k. Fewer than k rounds excludes.
Screened<std::vector<Round>> window_last_rounds(std::span<const Round> rounds,
                                                std::size_t k);

struct ManifestEntry {
  std::string dialogue_id;
  bool included = false;
  std::optional<Exclusion> exclusion;
  std::size_t input_messages = 0;
  std::size_t messages_before_marker = 0;
  std::size_t rounds_available = 0;
  std::size_t window_turns = 0;     // 2 * window rounds when included
  std::size_t window_messages = 0;  // source messages behind those turns
};

struct CorpusManifest {
  std::string corpus_id;
  std::size_t window_rounds = kDefaultWindowRounds;
  std::vector<ManifestEntry> dialogues;  // corpus order

  std::size_t included_count() const;
};

// Truncation, role assignment, merging, segmentation and windowing of
// one dialogue. `annotations` markers override the corpus field.
struct PreparedDialogue {
  ManifestEntry entry;
  std::optional<Dialogue> windowed;
};
PreparedDialogue prepare_dialogue(const RawDialogue& raw, const MarkerAnnotations& annotations,
                                  std::size_t window_rounds);

// Per-round mean and 95% Student-t half-width of every score.
struct MeanTrajectory {
  std::size_t n_dialogues = 0;
  // rounds[r][s] for round r+1 and score kAllScores[s].
  std::vector<std::array<stats::MeanCi, 4>> rounds;
};

// Requires every trajectory to have the same length.
MeanTrajectory aggregate_mean_trajectory(std::span<const Trajectory> trajectories);

inline constexpr std::string_view kAggregateCsvHeader = "round,score,mean,ci_half,n";
void write_aggregate_csv(std::ostream& out, const MeanTrajectory& aggregate);

struct PipelineResult {
  CorpusManifest manifest;
  std::vector<Trajectory> trajectories;  // included dialogues, corpus order
  MeanTrajectory aggregate;
};

// Runs the full preprocessing and scoring pass. Dialogues are scored on
// up to `config.jobs` threads; output order never depends on scheduling.
PipelineResult run_pipeline(std::span<const RawDialogue> corpus,
                            const MarkerAnnotations& annotations, const RunConfig& config,
                            std::string corpus_id);

nlohmann::json manifest_to_json(const CorpusManifest& manifest, const RunConfig& config);

// File-system safe stem for per-dialogue outputs.
std::string dialogue_file_stem(std::string_view dialogue_id);

}  // namespace alignscope

#endif  // ALIGNSCOPE_PIPELINE_HPP_
