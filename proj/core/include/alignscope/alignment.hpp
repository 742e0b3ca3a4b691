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

#ifndef ALIGNSCOPE_ALIGNMENT_HPP_
#define ALIGNSCOPE_ALIGNMENT_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/dialogue.hpp"
#include "alignscope/providers.hpp"

namespace alignscope {

inline constexpr double kDefaultAlpha = 0.7;

enum class Score { kLex, kSyn, kSem, kSit };
inline constexpr std::array<Score, 4> kAllScores = {Score::kLex, Score::kSyn, Score::kSem,
                                                    Score::kSit};

std::string_view to_string(Score score);
Score parse_score(std::string_view name);
// Legal value range of a score: [0,1] for lex/syn, [-1,1] for sem/sit.
std::pair<double, double> score_range(Score score);

struct AlignmentVector {
  std::size_t round = 0;
  double lex = 0.0;
  double syn = 0.0;
  double sem = 0.0;
  double sit = 0.0;

  double get(Score score) const;
};

// |a & b| / |a | b|; two empty sets score 0.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

double lex_align(const ContentWordSet& a, const ContentWordSet& b);
double syn_align(const DepLabelSet& a, const DepLabelSet& b);

// Cosine similarity, 0 when either vector is zero. Throws Error(kInternal)
// on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

// Throws Error(kProvider) if the embeddings come from different providers
// or dimensions.
double sem_align(const UtteranceEmbedding& a, const UtteranceEmbedding& b);

enum class Speaker { kA, kB };

// Exponentially smoothed discourse state of one speaker. Starts at the
// zero vector at round 0; only update_state produces later states.
class DiscourseState {
 public:
  DiscourseState(Speaker speaker, std::size_t dim);

  Speaker speaker() const { return speaker_; }
  std::size_t round() const { return round_; }
  std::span<const double> vector() const { return vector_; }

 private:
  friend DiscourseState update_state(const DiscourseState&, const UtteranceEmbedding&,
                                     double);
  Speaker speaker_;
  std::size_t round_ = 0;
  std::vector<double> vector_;
};

// S_t = alpha * S_{t-1} + (1 - alpha) * e_t, advancing the round by one.
// Throws Error(kConfig) for alpha outside [0,1] and Error(kInternal) for
// a dimension mismatch.
DiscourseState update_state(const DiscourseState& previous,
                            const UtteranceEmbedding& embedding, double alpha);

// Cosine of the two states; both must be at the same round.
double sit_align(const DiscourseState& a, const DiscourseState& b);

struct Trajectory {
  std::string dialogue_id;
  double alpha = kDefaultAlpha;
  nlohmann::json provider_fingerprints = nlohmann::json::object();
  std::vector<AlignmentVector> scores;
};

struct RoundFeatures {
  TurnFeatures initiator;
  TurnFeatures response;
};

void validate_alpha(double alpha);

// Threads the two discourse states through the rounds in order and emits
// one AlignmentVector per round.
std::vector<AlignmentVector> score_rounds(std::span<const RoundFeatures> rounds,
                                          double alpha);

class AlignmentEngine {
 public:
  AlignmentEngine(FeatureProviders providers, double alpha = kDefaultAlpha);

  double alpha() const { return alpha_; }
  const FeatureProviders& providers() const { return providers_; }

  std::vector<RoundFeatures> extract(const Dialogue& dialogue) const;
  // Requires at least one round. Provider failures are rethrown as
  // Error(kProvider) naming the round.
  Trajectory score_dialogue(const Dialogue& dialogue) const;

 private:
  FeatureProviders providers_;
  double alpha_;
};

// Scores are written with six decimals.
std::string format_score(double value);

inline constexpr std::string_view kTrajectoryCsvHeader = "dialogue_id,round,lex,syn,sem,sit";
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          bool header = true);
// Parses the CSV written by write_trajectory_csv (one or more dialogues).
std::vector<Trajectory> read_trajectory_csv(std::istream& in);

nlohmann::json trajectory_to_json(const Trajectory& trajectory);

}  // namespace alignscope

#endif  // ALIGNSCOPE_ALIGNMENT_HPP_
