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

// plan, report and serve.
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "alignscope/corpus_io.hpp"
#include "alignscope/providers.hpp"
#include "alignscope/resources.hpp"
#include "alignscope/service.hpp"
#include "alignscope/study.hpp"
#include "common.hpp"

namespace alignscope::cli {

namespace fs = std::filesystem;

namespace {

study::StudyPlan load_plan(const fs::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::kData, "plan is not valid JSON");
  study::StudyPlan plan = study::plan_from_json(doc);
  plan.validate();
  return plan;
}

std::vector<study::StudyEvent> load_events(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kData, "cannot open " + path.string());
  return study::read_event_log(in);
}

study::ConfidenceAggregator aggregator_from(const std::string& name) {
  auto parsed = study::parse_aggregator(name);
  if (!parsed) throw Error(ErrorKind::kUsage, "unknown aggregator '" + name + "'");
  return *parsed;
}

struct PlanArgs {
  fs::path corpus;
  std::size_t participants = 0;
  std::vector<std::string> participant_ids;
  std::uint64_t seed = 0;
  fs::path out;
};

void run_plan(const PlanArgs& args) {
  std::vector<std::string> ids = args.participant_ids;
  if (ids.empty()) {
    if (args.participants == 0) {
      throw Error(ErrorKind::kUsage, "give --participants or --participant-ids");
    }
    for (std::size_t i = 1; i <= args.participants; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "p%03zu", i);
      ids.emplace_back(id);
    }
  }
  std::vector<study::PlannedDialogue> dialogues;
  for (const RawDialogue& raw : read_corpus(args.corpus)) {
    if (!raw.label) {
      throw Error(ErrorKind::kData, "dialogue '" + raw.dialogue_id + "' has no label");
    }
    dialogues.push_back({raw.dialogue_id, *raw.label, build_dialogue(raw).rounds.size()});
  }
  const study::StudyPlan plan = study::generate_plan(ids, dialogues, args.seed);
  write_text(args.out, pretty(study::to_json(plan)));
  for (const std::string& w : plan.warnings) std::cerr << "alignscope: warning: " << w << '\n';
  std::cout << "planned " << plan.assignments.size() << " sessions for " << ids.size()
            << " participants\n";
}

struct ReportArgs {
  fs::path plan;
  fs::path events;
  std::string aggregator = "mean";
  std::optional<fs::path> out;
  std::optional<fs::path> csv;
};

void run_report(const ReportArgs& args) {
  const study::StudyPlan plan = load_plan(args.plan);
  const std::vector<study::StudyEvent> events = load_events(args.events);
  const std::vector<study::SessionRecord> records = study::replay_events(events, plan);
  const study::StudyReport report =
      study::compute_report(records, plan, aggregator_from(args.aggregator));
  const std::string body = study::render_report(report);
  if (args.out) {
    write_text(*args.out, body);
  } else {
    std::cout << body;
  }
  if (args.csv) {
    std::ostringstream csv;
    study::write_condition_csv(csv, report);
    write_text(*args.csv, csv.str());
  }
}

struct ServeArgs {
  fs::path plan;
  fs::path corpus;
  fs::path events;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> admin_token;
  std::string aggregator = "mean";
  RunFlags flags;
};

void run_serve(const ServeArgs& args) {
  const RunConfig config = args.flags.resolve();
  std::string admin_token;
  if (args.admin_token) {
    admin_token = *args.admin_token;
  } else if (const char* env = std::getenv("ALIGNSCOPE_ADMIN_TOKEN")) {
    admin_token = env;
  } else {
    throw Error(ErrorKind::kUsage, "set --admin-token or ALIGNSCOPE_ADMIN_TOKEN");
  }

  const study::StudyPlan plan = load_plan(args.plan);
  const std::vector<RawDialogue> corpus = read_corpus(args.corpus);
  const AlignmentEngine engine(make_default_providers(config.providers), config.alpha);
  auto content = service::load_study_content(corpus, plan, engine);
  const KeywordLexicon lexicon(
      load_resource(kScamKeywordsResource, config.providers.resource_dir));

  std::vector<study::StudyEvent> previous;
  if (fs::exists(args.events)) previous = load_events(args.events);
  service::JsonlEventLog log(args.events);

  service::ServiceConfig service_config;
  service_config.hints.thresholds = {config.tau_high, config.tau_low};
  service_config.admin_token = admin_token;
  service_config.aggregator = aggregator_from(args.aggregator);
  service::StudyService svc(plan, std::move(content), lexicon, service_config,
                            [&log](const study::StudyEvent& e) { log.append(e); });
  svc.restore(previous);

  // Signals are taken synchronously by a watcher thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::HttpServer server(svc);
  const int port = server.bind(args.host, args.port);
  std::cout << "listening on " << args.host << ':' << port << std::endl;
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  const bool ok = server.listen();
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  if (!ok) throw Error(ErrorKind::kInternal, "listener stopped unexpectedly");
}

}  // namespace

void register_study_commands(CLI::App& app) {
  auto pl = std::make_shared<PlanArgs>();
  CLI::App* cmd = app.add_subcommand("plan", "build a Latin-square study plan");
  cmd->add_option("--corpus", pl->corpus, "labelled JSONL corpus")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--participants", pl->participants, "number of participants (p001...)");
  cmd->add_option("--participant-ids", pl->participant_ids, "explicit participant ids")
      ->delimiter(',');
  cmd->add_option("--seed", pl->seed, "presentation-order seed");
  cmd->add_option("--out", pl->out, "plan JSON file")->required();
  cmd->callback([pl] { run_plan(*pl); });

  auto rp = std::make_shared<ReportArgs>();
  cmd = app.add_subcommand("report", "regenerate the study report from an event log");
  cmd->add_option("--plan", rp->plan, "plan JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--events", rp->events, "JSONL event log")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--aggregator", rp->aggregator, "mean | final_round");
  cmd->add_option("--out", rp->out, "report file (default: stdout)");
  cmd->add_option("--csv", rp->csv, "per-condition metrics CSV");
  cmd->callback([rp] { run_report(*rp); });

  auto sv = std::make_shared<ServeArgs>();
  cmd = app.add_subcommand("serve", "run the study HTTP service");
  cmd->add_option("--plan", sv->plan, "plan JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--corpus", sv->corpus, "JSONL corpus holding the plan's dialogues")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--events", sv->events, "JSONL event log (appended, replayed on start)")
      ->required();
  cmd->add_option("--host", sv->host, "bind address");
  cmd->add_option("--port", sv->port, "port, 0 picks a free one");
  cmd->add_option("--admin-token", sv->admin_token, "bearer token for /admin routes");
  cmd->add_option("--aggregator", sv->aggregator, "mean | final_round");
  sv->flags.attach(*cmd);
  cmd->callback([sv] { run_serve(*sv); });
}

}  // namespace alignscope::cli
