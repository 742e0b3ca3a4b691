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

#include "alignscope/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "alignscope/error.hpp"

namespace alignscope {

std::string_view to_string(Score score) {
  switch (score) {
    case Score::kLex: return "lex";
    case Score::kSyn: return "syn";
    case Score::kSem: return "sem";
    case Score::kSit: return "sit";
  }
  return "?";
}

Score parse_score(std::string_view name) {
  for (Score score : kAllScores) {
    if (to_string(score) == name) return score;
  }
  throw Error(ErrorKind::kUsage, "unknown score '" + std::string(name) + "'");
}

std::pair<double, double> score_range(Score score) {
  return (score == Score::kLex || score == Score::kSyn) ? std::pair{0.0, 1.0}
                                                         : std::pair{-1.0, 1.0};
}

double AlignmentVector::get(Score score) const {
  switch (score) {
    case Score::kLex: return lex;
    case Score::kSyn: return syn;
    case Score::kSem: return sem;
    case Score::kSit: return sit;
  }
  return 0.0;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  const std::size_t united = a.size() + b.size() - shared;
  return united == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(united);
}

double lex_align(const ContentWordSet& a, const ContentWordSet& b) {
  return jaccard(a.tokens, b.tokens);
}

double syn_align(const DepLabelSet& a, const DepLabelSet& b) {
  return jaccard(a.labels, b.labels);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInternal, "cosine of vectors with different dimensions");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double sem_align(const UtteranceEmbedding& a, const UtteranceEmbedding& b) {
  if (a.provider_id != b.provider_id || a.dim() != b.dim()) {
    throw Error(ErrorKind::kProvider, "embeddings from '" + a.provider_id + "' (dim " +
                                          std::to_string(a.dim()) + ") and '" +
                                          b.provider_id + "' (dim " +
                                          std::to_string(b.dim()) + ") are not comparable");
  }
  return cosine(a.vector, b.vector);
}

DiscourseState::DiscourseState(Speaker speaker, std::size_t dim)
    : speaker_(speaker), vector_(dim, 0.0) {}

void validate_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::kConfig, "alpha must lie in [0,1]");
  }
}

DiscourseState update_state(const DiscourseState& previous,
                            const UtteranceEmbedding& embedding, double alpha) {
  validate_alpha(alpha);
  if (embedding.dim() != previous.vector_.size()) {
    throw Error(ErrorKind::kInternal, "discourse state and embedding dimensions differ");
  }
  DiscourseState next = previous;
  next.round_ = previous.round_ + 1;
  for (std::size_t i = 0; i < next.vector_.size(); ++i) {
    next.vector_[i] = alpha * previous.vector_[i] + (1.0 - alpha) * embedding.vector[i];
  }
  return next;
}

double sit_align(const DiscourseState& a, const DiscourseState& b) {
  if (a.round() != b.round()) {
    throw Error(ErrorKind::kInternal, "discourse states at different rounds (" +
                                          std::to_string(a.round()) + " vs " +
                                          std::to_string(b.round()) + ")");
  }
  return cosine(a.vector(), b.vector());
}

std::vector<AlignmentVector> score_rounds(std::span<const RoundFeatures> rounds,
                                          double alpha) {
  validate_alpha(alpha);
  std::vector<AlignmentVector> scores;
  if (rounds.empty()) return scores;
  scores.reserve(rounds.size());
  const std::size_t dim = rounds.front().initiator.embedding.dim();
  DiscourseState state_a(Speaker::kA, dim);
  DiscourseState state_b(Speaker::kB, dim);
  for (const RoundFeatures& round : rounds) {
    AlignmentVector v;
    v.round = scores.size() + 1;
    v.lex = lex_align(round.initiator.words, round.response.words);
    v.syn = syn_align(round.initiator.labels, round.response.labels);
    v.sem = sem_align(round.initiator.embedding, round.response.embedding);
    state_a = update_state(state_a, round.initiator.embedding, alpha);
    state_b = update_state(state_b, round.response.embedding, alpha);
    v.sit = sit_align(state_a, state_b);
    scores.push_back(v);
  }
  return scores;
}

AlignmentEngine::AlignmentEngine(FeatureProviders providers, double alpha)
    : providers_(std::move(providers)), alpha_(alpha) {
  validate_alpha(alpha_);
}

std::vector<RoundFeatures> AlignmentEngine::extract(const Dialogue& dialogue) const {
  std::vector<RoundFeatures> features;
  features.reserve(dialogue.rounds.size());
  for (const Round& round : dialogue.rounds) {
    try {
      features.push_back(RoundFeatures{providers_.analyze(round.initiator.text),
                                       providers_.analyze(round.response.text)});
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kProvider, "dialogue '" + dialogue.dialogue_id + "' round " +
                                            std::to_string(round.index) + ": " + e.what());
    }
  }
  return features;
}

Trajectory AlignmentEngine::score_dialogue(const Dialogue& dialogue) const {
  if (dialogue.rounds.empty()) {
    throw Error(ErrorKind::kData, "dialogue '" + dialogue.dialogue_id + "' has no rounds");
  }
  const std::vector<RoundFeatures> features = extract(dialogue);
  Trajectory trajectory;
  trajectory.dialogue_id = dialogue.dialogue_id;
  trajectory.alpha = alpha_;
  trajectory.provider_fingerprints = providers_.fingerprints();
  trajectory.scores = score_rounds(features, alpha_);
  return trajectory;
}

std::string format_score(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  std::string text(buffer);
  if (text == "-0.000000") text = "0.000000";
  return text;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool header) {
  if (trajectory.dialogue_id.find_first_of(",\"\r\n") != std::string::npos) {
    throw Error(ErrorKind::kData,
                "dialogue id '" + trajectory.dialogue_id + "' cannot be written to CSV");
  }
  if (header) out << kTrajectoryCsvHeader << '\n';
  for (const AlignmentVector& v : trajectory.scores) {
    out << trajectory.dialogue_id << ',' << v.round << ',' << format_score(v.lex) << ','
        << format_score(v.syn) << ',' << format_score(v.sem) << ','
        << format_score(v.sit) << '\n';
  }
}

std::vector<Trajectory> read_trajectory_csv(std::istream& in) {
  std::vector<Trajectory> trajectories;
  std::string line;
  if (!std::getline(in, line)) return trajectories;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryCsvHeader) {
    throw Error(ErrorKind::kData, "trajectory CSV header must be '" +
                                      std::string(kTrajectoryCsvHeader) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    for (std::string field; std::getline(row, field, ',');) fields.push_back(field);
    if (fields.size() != 6) {
      throw Error(ErrorKind::kData, "trajectory CSV line " + std::to_string(line_no) +
                                        ": expected 6 fields");
    }
    AlignmentVector v;
    try {
      v.round = std::stoul(fields[1]);
      v.lex = std::stod(fields[2]);
      v.syn = std::stod(fields[3]);
      v.sem = std::stod(fields[4]);
      v.sit = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kData,
                  "trajectory CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (trajectories.empty() || trajectories.back().dialogue_id != fields[0]) {
      trajectories.push_back(Trajectory{fields[0], kDefaultAlpha, nlohmann::json::object(), {}});
    }
    Trajectory& current = trajectories.back();
    if (v.round != current.scores.size() + 1) {
      throw Error(ErrorKind::kData, "trajectory CSV line " + std::to_string(line_no) +
                                        ": rounds must be contiguous from 1");
    }
    current.scores.push_back(v);
  }
  return trajectories;
}

namespace {
double round6(double value) {
  const double r = std::round(value * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}
}  // namespace

nlohmann::json trajectory_to_json(const Trajectory& trajectory) {
  nlohmann::json scores = nlohmann::json::array();
  for (const AlignmentVector& v : trajectory.scores) {
    scores.push_back({{"round", v.round},
                      {"lex", round6(v.lex)},
                      {"syn", round6(v.syn)},
                      {"sem", round6(v.sem)},
                      {"sit", round6(v.sit)}});
  }
  return {
      {"schema_version", 1},
      {"dialogue_id", trajectory.dialogue_id},
      {"alpha", trajectory.alpha},
      {"providers", trajectory.provider_fingerprints},
      {"conventions",
       {{"empty_set_jaccard", 0}, {"zero_vector_cosine", 0}, {"decimals", 6}}},
      {"scores", std::move(scores)},
  };
}

}  // namespace alignscope
