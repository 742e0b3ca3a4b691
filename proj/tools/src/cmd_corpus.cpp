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

// preprocess, analyze and synth.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "alignscope/corpus_io.hpp"
#include "alignscope/hints.hpp"
#include "alignscope/pipeline.hpp"
#include "alignscope/providers.hpp"
#include "alignscope/stats.hpp"
#include "alignscope/synth.hpp"
#include "common.hpp"

namespace alignscope::cli {

namespace fs = std::filesystem;

namespace {

struct PreprocessArgs {
  fs::path corpus;
  fs::path annotations;
  fs::path out;
  std::optional<std::string> corpus_id;
  RunFlags flags;
};

void run_preprocess(const PreprocessArgs& args) {
  RunConfig config = args.flags.resolve();
  config.paths["corpus"] = path_string(args.corpus);
  config.paths["annotations"] = path_string(args.annotations);
  const std::vector<RawDialogue> corpus = read_corpus(args.corpus);
  const MarkerAnnotations annotations = read_annotations(args.annotations);
  const std::string corpus_id =
      args.corpus_id.value_or(args.corpus.filename().replace_extension().string());

  const PipelineResult result = run_pipeline(corpus, annotations, config, corpus_id);

  std::map<std::string, std::string> stems;
  for (const Trajectory& t : result.trajectories) {
    const std::string stem = dialogue_file_stem(t.dialogue_id);
    auto [it, fresh] = stems.emplace(stem, t.dialogue_id);
    if (!fresh) {
      throw Error(ErrorKind::kData, "dialogue ids '" + it->second + "' and '" + t.dialogue_id +
                                        "' map to the same file name");
    }
  }

  nlohmann::json manifest = manifest_to_json(result.manifest, config);
  manifest["provider_fingerprints"] = make_default_providers(config.providers).fingerprints();
  write_text(args.out / "manifest.json", pretty(manifest));
  fs::create_directories(args.out / "trajectories");
  for (const Trajectory& t : result.trajectories) {
    std::ostringstream csv;
    write_trajectory_csv(csv, t);
    write_text(args.out / "trajectories" / (dialogue_file_stem(t.dialogue_id) + ".csv"),
               csv.str());
  }
  if (!result.trajectories.empty()) {
    std::ostringstream csv;
    write_aggregate_csv(csv, result.aggregate);
    write_text(args.out / "aggregate.csv", csv.str());
  }

  const nlohmann::json& counts = manifest["counts"];
  std::cout << "corpus " << corpus_id << ": " << counts["input"].get<std::size_t>()
            << " dialogues, " << counts["included"].get<std::size_t>() << " included, "
            << counts["excluded"].get<std::size_t>() << " excluded\n";
  for (const auto& [reason, n] : counts["by_reason"].items()) {
    std::cout << "  excluded " << reason << ": " << n.get<std::size_t>() << '\n';
  }
}

struct AnalyzeArgs {
  fs::path trajectories;
  fs::path out;
  RunFlags flags;
};

std::vector<Trajectory> load_trajectories(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::kUsage, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Trajectory> trajectories;
  std::set<std::string> seen;
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::kData, "cannot open " + file.string());
    for (Trajectory& t : read_trajectory_csv(in)) {
      if (!seen.insert(t.dialogue_id).second) {
        throw Error(ErrorKind::kData, "dialogue '" + t.dialogue_id + "' appears twice");
      }
      trajectories.push_back(std::move(t));
    }
  }
  if (trajectories.empty()) {
    throw Error(ErrorKind::kUsage, "no trajectory CSV files in " + dir.string());
  }
  return trajectories;
}

void run_analyze(const AnalyzeArgs& args) {
  RunConfig config = args.flags.resolve();
  config.paths["trajectories"] = path_string(args.trajectories);
  const std::vector<Trajectory> trajectories = load_trajectories(args.trajectories);

  nlohmann::json trends = nlohmann::json::array();
  std::vector<stats::TrendResult> results;
  for (Score score : kAllScores) {
    results.push_back(stats::trend_analysis(trajectories, score));
    trends.push_back(stats::to_json(results.back()));
  }

  const PatternThresholds thresholds{config.tau_high, config.tau_low};
  std::size_t final_active = 0;
  for (const Trajectory& t : trajectories) {
    final_active += detect_pattern(window_scores(t.scores, t.scores.size()), thresholds).active;
  }

  const std::size_t length = trajectories.front().scores.size();
  const bool equal_length =
      std::all_of(trajectories.begin(), trajectories.end(),
                  [&](const Trajectory& t) { return t.scores.size() == length; });

  nlohmann::json doc = {
      {"schema_version", 1},
      {"n_dialogues", trajectories.size()},
      {"trends", trends},
      {"pattern",
       {{"window", kDefaultHintWindow},
        {"tau_high", config.tau_high},
        {"tau_low", config.tau_low},
        {"final_window_active", final_active}}},
      {"aggregate", equal_length ? nlohmann::json("aggregate.csv") : nlohmann::json(nullptr)},
      {"run_config", to_json(config)},
  };
  write_text(args.out / "analysis.json", pretty(doc));
  if (equal_length) {
    std::ostringstream csv;
    write_aggregate_csv(csv, aggregate_mean_trajectory(trajectories));
    write_text(args.out / "aggregate.csv", csv.str());
  } else {
    std::cerr << "alignscope: trajectories differ in length; aggregate.csv not written\n";
  }

  std::cout << "analyzed " << trajectories.size() << " dialogues\n";
  for (const stats::TrendResult& r : results) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-4s median_rho=%s p=%.3g degenerate=%zu\n",
                  r.score_name.c_str(),
                  r.median_rho ? format_score(*r.median_rho).c_str() : "null", r.wilcoxon.p,
                  r.degenerate_count);
    std::cout << line;
  }
  std::cout << "  pattern active in final window: " << final_active << '\n';
}

struct SynthArgs {
  std::string kind = "planted_decline";
  SynthOptions options;
  fs::path out;
};

void run_synth(SynthArgs args) {
  const std::optional<SynthKind> kind = parse_synth_kind(args.kind);
  if (!kind) throw Error(ErrorKind::kUsage, "unknown synth kind '" + args.kind + "'");
  args.options.kind = *kind;
  const SynthCorpus corpus = generate_synthetic(args.options);

  std::ostringstream lines;
  write_corpus(lines, corpus.dialogues);
  write_text(args.out / "corpus.jsonl", lines.str());
  write_text(args.out / "annotations.json", pretty(nlohmann::json(corpus.annotations)));
  const SynthOptions& o = args.options;
  nlohmann::json meta = {{"schema_version", 1},
                         {"kind", to_string(o.kind)},
                         {"n", o.n},
                         {"rounds", o.rounds},
                         {"seed", o.seed},
                         {"decline_start", o.decline_start},
                         {"decline_start_round", decline_start_round(o)},
                         {"shared_words", o.shared_words},
                         {"unique_words", o.unique_words}};
  write_text(args.out / "synth.json", pretty(meta));
  std::cout << "wrote " << corpus.dialogues.size() << ' ' << args.kind << " dialogues to "
            << path_string(args.out / "corpus.jsonl") << '\n';
}

}  // namespace

void register_corpus_commands(CLI::App& app) {
  auto pre = std::make_shared<PreprocessArgs>();
  CLI::App* cmd = app.add_subcommand("preprocess", "truncate, window and score a corpus");
  cmd->add_option("--corpus", pre->corpus, "JSONL corpus")->required()->check(CLI::ExistingFile);
  cmd->add_option("--annotations", pre->annotations, "JSON marker annotations")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", pre->out, "output directory")->required();
  cmd->add_option("--corpus-id", pre->corpus_id, "corpus name (default: file stem)");
  pre->flags.attach(*cmd);
  cmd->callback([pre] { run_preprocess(*pre); });

  auto an = std::make_shared<AnalyzeArgs>();
  cmd = app.add_subcommand("analyze", "trend statistics over scored trajectories");
  cmd->add_option("--trajectories", an->trajectories, "directory of trajectory CSVs")
      ->required();
  cmd->add_option("--out", an->out, "output directory")->required();
  an->flags.attach(*cmd);
  cmd->callback([an] { run_analyze(*an); });

  auto sy = std::make_shared<SynthArgs>();
  cmd = app.add_subcommand("synth", "generate a planted-property corpus");
  cmd->add_option("kind", sy->kind, "planted_decline | flat | noise")
      ->check(CLI::IsMember({"planted_decline", "flat", "noise"}));
  cmd->add_option("--n", sy->options.n, "number of dialogues");
  cmd->add_option("--rounds", sy->options.rounds, "rounds per dialogue");
  cmd->add_option("--seed", sy->options.seed, "random seed");
  cmd->add_option("--decline-start", sy->options.decline_start,
                  "fraction of rounds before the planted decline begins");
  cmd->add_option("--out", sy->out, "output directory")->required();
  cmd->callback([sy] { run_synth(*sy); });
}

}  // namespace alignscope::cli
