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

#ifndef ALIGNSCOPE_SERVICE_HPP_
#define ALIGNSCOPE_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/hints.hpp"
#include "alignscope/study.hpp"

namespace alignscope::service {

inline constexpr int kApiSchemaVersion = 1;

struct Request {
  std::string method;         // "GET" or "POST"
  std::string path;           // without query string
  std::string body;
  std::string authorization;  // raw Authorization header, may be empty
  std::map<std::string, std::string> query;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

struct ServiceConfig {
  HintSettings hints;
  std::string admin_token;
  study::ConfidenceAggregator aggregator = study::ConfidenceAggregator::kMean;
};

using EventSink = std::function<void(const study::StudyEvent&)>;
using Clock = std::function<std::string()>;
using TokenSource = std::function<std::string()>;

// UTC ISO-8601 with milliseconds.
std::string utc_now();
// 128 random bits from the OS entropy source, hex encoded.
std::string random_token();

// Appends events as JSON lines, flushing after each one.
class JsonlEventLog {
 public:
  explicit JsonlEventLog(const std::filesystem::path& path);
  void append(const study::StudyEvent& event);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

// Scores every plan dialogue found in `corpus` with `engine`; rounds must
// match the plan. Throws Error(kData) for missing or mismatched dialogues.
std::map<std::string, study::StudyDialogue> load_study_content(
    std::span<const RawDialogue> corpus, const study::StudyPlan& plan,
    const AlignmentEngine& engine);

// Transport-independent implementation of the study API:
//   POST /sessions                    {participant, dialogue}
//   POST /sessions/{token}/round      {confidence?}
//   POST /sessions/{token}/verdict    {verdict, confidence?}
//   GET  /admin/report                admin bearer token
//   GET  /admin/trajectories/{id}     admin bearer token, ?format=csv|json
// Every response body carries schema_version; errors are {code, message}.
class StudyService {
 public:
  StudyService(study::StudyPlan plan, std::map<std::string, study::StudyDialogue> content,
               KeywordLexicon lexicon, ServiceConfig config, EventSink sink,
               Clock clock = utc_now, TokenSource tokens = random_token);

  // Rebuilds session state from a previous event log. Restored sessions
  // count as started; they have no token.
  void restore(std::span<const study::StudyEvent> events);

  Response handle(const Request& request);

  // Live report body, identical to study::render_report over the log.
  std::string report_body() const;

 private:
  struct LiveSession {
    std::mutex busy;
    study::ReviewSession session;
    const study::StudyDialogue* content = nullptr;
    LiveSession(study::ReviewSession s, const study::StudyDialogue* c)
        : session(std::move(s)), content(c) {}
  };

  Response create_session(const nlohmann::json& body);
  Response next_round(const std::string& token, const nlohmann::json& body);
  Response verdict(const std::string& token, const nlohmann::json& body);
  Response trajectory(const std::string& dialogue_id, const std::string& format) const;
  bool is_admin(const Request& request) const;
  std::shared_ptr<LiveSession> find(const std::string& token) const;
  void emit(const std::vector<study::StudyEvent>& events);

  study::StudyPlan plan_;
  std::map<std::string, study::StudyDialogue> content_;
  KeywordLexicon lexicon_;
  ServiceConfig config_;
  EventSink sink_;
  Clock clock_;
  TokenSource tokens_;

  mutable std::mutex mutex_;  // guards the maps below
  std::map<std::string, std::shared_ptr<LiveSession>> by_token_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<LiveSession>> by_pair_;
  std::mutex sink_mutex_;
};

Response error_response(int status, std::string_view code, std::string_view message);

// Blocking HTTP front end; returns when stop() is called from another
// thread or the listener fails.
class HttpServer {
 public:
  explicit HttpServer(StudyService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to host:port (port 0 picks a free port). Returns the bound port.
  int bind(const std::string& host, int port);
  bool listen();  // after bind()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace alignscope::service

#endif  // ALIGNSCOPE_SERVICE_HPP_
