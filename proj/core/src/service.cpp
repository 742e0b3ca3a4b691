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

#include "alignscope/service.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>
#include <sstream>
#include <utility>

#include "alignscope/error.hpp"

namespace alignscope::service {

namespace {

using nlohmann::json;

std::string dump_body(json body) {
  body["schema_version"] = kApiSchemaVersion;
  return body.dump();
}

Response ok(json body) { return Response{200, dump_body(std::move(body)), "application/json", {}}; }

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string_view::npos ? path.size() : j;
    parts.emplace_back(path.substr(i, end - i));
    i = end;
  }
  return parts;
}

// Parses a write body; an empty body is an empty object.
json parse_object(const std::string& body, std::initializer_list<std::string_view> allowed) {
  json doc = body.empty() ? json::object() : json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kUsage, "request body must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (std::string_view name : allowed) known = known || key == name;
    if (!known) throw Error(ErrorKind::kUsage, "unknown field '" + key + "'");
  }
  return doc;
}

std::string required_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
    throw Error(ErrorKind::kUsage, std::string("field '") + key + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

std::optional<int> optional_confidence(const json& doc) {
  auto it = doc.find("confidence");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw Error(ErrorKind::kUsage, "confidence must be an integer in 1..10");
  }
  const auto value = it->get<std::int64_t>();
  if (value < study::kMinConfidence || value > study::kMaxConfidence) {
    throw Error(ErrorKind::kUsage, "confidence must be an integer in 1..10");
  }
  return static_cast<int>(value);
}

Response from_error(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kUsage:
    case ErrorKind::kData:
    case ErrorKind::kConfig:
      return error_response(400, "bad_request", e.what());
    case ErrorKind::kNotFound:
      return error_response(404, "not_found", e.what());
    case ErrorKind::kConflict:
      return error_response(409, "conflict", e.what());
    case ErrorKind::kState: {
      const std::string_view what = e.what();
      if (what.find("verdict required") != std::string_view::npos) {
        return error_response(409, "verdict_required", what);
      }
      if (what.find("closed") != std::string_view::npos) {
        return error_response(409, "session_closed", what);
      }
      return error_response(409, "invalid_state", what);
    }
    case ErrorKind::kProvider:
    case ErrorKind::kInternal:
      break;
  }
  return error_response(500, "internal", e.what());
}

}  // namespace

Response error_response(int status, std::string_view code, std::string_view message) {
  return Response{status, dump_body({{"code", code}, {"message", message}}), "application/json",
                  {}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms % 1000));
  return buf;
}

std::string random_token() {
  std::random_device rd;
  std::string out;
  char buf[9];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

JsonlEventLog::JsonlEventLog(const std::filesystem::path& path)
    : out_(path, std::ios::app | std::ios::binary) {
  if (!out_) throw Error(ErrorKind::kData, "cannot open event log " + path.string());
}

void JsonlEventLog::append(const study::StudyEvent& event) {
  std::lock_guard lock(mutex_);
  out_ << study::to_json(event).dump() << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorKind::kInternal, "event log write failed");
}

std::map<std::string, study::StudyDialogue> load_study_content(
    std::span<const RawDialogue> corpus, const study::StudyPlan& plan,
    const AlignmentEngine& engine) {
  std::map<std::string, const RawDialogue*> by_id;
  for (const RawDialogue& raw : corpus) by_id.emplace(raw.dialogue_id, &raw);
  std::map<std::string, study::StudyDialogue> content;
  for (const study::PlannedDialogue& planned : plan.dialogues) {
    auto it = by_id.find(planned.dialogue_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kData, "plan dialogue '" + planned.dialogue_id + "' not in corpus");
    }
    Dialogue dialogue = build_dialogue(*it->second);
    if (dialogue.rounds.size() != planned.rounds) {
      throw Error(ErrorKind::kData, "dialogue '" + planned.dialogue_id + "' has " +
                                        std::to_string(dialogue.rounds.size()) +
                                        " rounds, plan expects " +
                                        std::to_string(planned.rounds));
    }
    Trajectory trajectory = engine.score_dialogue(dialogue);
    content.emplace(planned.dialogue_id,
                    study::StudyDialogue{std::move(dialogue), std::move(trajectory)});
  }
  return content;
}

StudyService::StudyService(study::StudyPlan plan,
                           std::map<std::string, study::StudyDialogue> content,
                           KeywordLexicon lexicon, ServiceConfig config, EventSink sink,
                           Clock clock, TokenSource tokens)
    : plan_(std::move(plan)),
      content_(std::move(content)),
      lexicon_(std::move(lexicon)),
      config_(std::move(config)),
      sink_(std::move(sink)),
      clock_(std::move(clock)),
      tokens_(std::move(tokens)) {
  plan_.validate();
  for (const study::PlannedDialogue& planned : plan_.dialogues) {
    auto it = content_.find(planned.dialogue_id);
    if (it == content_.end()) {
      throw Error(ErrorKind::kData, "no content for plan dialogue '" + planned.dialogue_id + "'");
    }
    if (it->second.dialogue.rounds.size() != planned.rounds) {
      throw Error(ErrorKind::kData, "round count mismatch for '" + planned.dialogue_id + "'");
    }
  }
  if (config_.admin_token.empty()) {
    throw Error(ErrorKind::kConfig, "admin token must not be empty");
  }
}

void StudyService::restore(std::span<const study::StudyEvent> events) {
  // Validates every event against the plan before touching live state.
  (void)study::replay_events(events, plan_);
  std::lock_guard lock(mutex_);
  std::map<std::pair<std::string, std::string>, std::shared_ptr<LiveSession>> rebuilt;
  for (const study::StudyEvent& event : events) {
    auto key = std::make_pair(event.participant, event.dialogue);
    auto it = rebuilt.find(key);
    if (it == rebuilt.end()) {
      const study::Assignment* a = plan_.find(event.participant, event.dialogue);
      const study::PlannedDialogue* d = plan_.dialogue(event.dialogue);
      auto session = std::make_shared<LiveSession>(
          study::ReviewSession(event.participant, event.dialogue, a->condition, d->rounds),
          &content_.at(event.dialogue));
      it = rebuilt.emplace(key, std::move(session)).first;
    }
    it->second->session.apply(event);
  }
  for (auto& [key, session] : rebuilt) by_pair_[key] = std::move(session);
}

std::shared_ptr<StudyService::LiveSession> StudyService::find(const std::string& token) const {
  std::lock_guard lock(mutex_);
  auto it = by_token_.find(token);
  return it == by_token_.end() ? nullptr : it->second;
}

void StudyService::emit(const std::vector<study::StudyEvent>& events) {
  std::lock_guard lock(sink_mutex_);
  for (const study::StudyEvent& event : events) {
    if (sink_) sink_(event);
  }
}

bool StudyService::is_admin(const Request& request) const {
  constexpr std::string_view kBearer = "Bearer ";
  const std::string& auth = request.authorization;
  return auth.size() > kBearer.size() && auth.compare(0, kBearer.size(), kBearer) == 0 &&
         auth.substr(kBearer.size()) == config_.admin_token;
}

Response StudyService::handle(const Request& request) {
  try {
    const std::vector<std::string> parts = split_path(request.path);
    if (request.method == "POST" && parts.size() == 1 && parts[0] == "sessions") {
      return create_session(parse_object(request.body, {"participant", "dialogue"}));
    }
    if (request.method == "POST" && parts.size() == 3 && parts[0] == "sessions") {
      if (parts[2] == "round") {
        return next_round(parts[1], parse_object(request.body, {"confidence"}));
      }
      if (parts[2] == "verdict") {
        return verdict(parts[1], parse_object(request.body, {"verdict", "confidence"}));
      }
    }
    if (request.method == "GET" && !parts.empty() && parts[0] == "admin") {
      if (!is_admin(request)) return error_response(401, "unauthorized", "admin token required");
      if (parts.size() == 2 && parts[1] == "report") {
        return Response{200, report_body(), "application/json", {}};
      }
      if (parts.size() == 3 && parts[1] == "trajectories") {
        auto fmt = request.query.find("format");
        return trajectory(parts[2], fmt == request.query.end() ? "json" : fmt->second);
      }
    }
    return error_response(404, "not_found", "no route for " + request.method + " " + request.path);
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

Response StudyService::create_session(const json& body) {
  const std::string participant = required_string(body, "participant");
  const std::string dialogue = required_string(body, "dialogue");
  const study::Assignment* assignment = plan_.find(participant, dialogue);
  if (assignment == nullptr) {
    return error_response(404, "not_found",
                          "(" + participant + ", " + dialogue + ") is not in the study plan");
  }
  const study::PlannedDialogue* planned = plan_.dialogue(dialogue);
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(participant, dialogue);
  if (by_pair_.count(key) != 0) {
    return error_response(409, "conflict", "session already started");
  }
  std::string token;
  do {
    token = tokens_();
  } while (token.empty() || by_token_.count(token) != 0);
  auto session = std::make_shared<LiveSession>(
      study::ReviewSession(participant, dialogue, assignment->condition, planned->rounds),
      &content_.at(dialogue));
  by_pair_.emplace(key, session);
  by_token_.emplace(token, session);
  return ok({{"token", token},
             {"participant", participant},
             {"dialogue", dialogue},
             {"cursor", 0},
             {"total_rounds", planned->rounds}});
}

Response StudyService::next_round(const std::string& token, const json& body) {
  const std::optional<int> confidence = optional_confidence(body);
  auto live = find(token);
  if (!live) return error_response(401, "unauthorized", "unknown session token");
  std::unique_lock busy(live->busy, std::try_to_lock);
  if (!busy.owns_lock()) return error_response(409, "busy", "request in progress for session");

  study::ReviewSession next = live->session;
  const std::vector<study::StudyEvent> events = next.advance_round(confidence, clock_());
  const study::SessionRecord& record = next.record();
  const study::RoundPayload payload = study::make_payload(
      *live->content, record.condition, next.cursor(), lexicon_, config_.hints);
  emit(events);
  live->session = std::move(next);
  return ok(study::to_json(payload));
}

Response StudyService::verdict(const std::string& token, const json& body) {
  const std::optional<int> confidence = optional_confidence(body);
  const std::string verdict_name = required_string(body, "verdict");
  const std::optional<Label> label = parse_label(verdict_name);
  if (!label) throw Error(ErrorKind::kUsage, "verdict must be 'scam' or 'non_scam'");
  auto live = find(token);
  if (!live) return error_response(401, "unauthorized", "unknown session token");
  std::unique_lock busy(live->busy, std::try_to_lock);
  if (!busy.owns_lock()) return error_response(409, "busy", "request in progress for session");

  study::ReviewSession next = live->session;
  const std::vector<study::StudyEvent> events = next.submit_verdict(*label, confidence, clock_());
  emit(events);
  live->session = std::move(next);
  const study::SessionRecord& record = live->session.record();
  return ok({{"status", "closed"},
             {"participant", record.participant_id},
             {"dialogue", record.dialogue_id},
             {"verdict", to_string(*record.final_verdict)},
             {"decision_round", *record.decision_round},
             {"rounds_revealed", record.revealed()}});
}

Response StudyService::trajectory(const std::string& dialogue_id,
                                  const std::string& format) const {
  auto it = content_.find(dialogue_id);
  if (it == content_.end()) {
    return error_response(404, "not_found", "no trajectory for '" + dialogue_id + "'");
  }
  if (format == "csv") {
    std::ostringstream out;
    write_trajectory_csv(out, it->second.trajectory);
    return Response{200, out.str(), "text/csv",
                    {{"X-Schema-Version", std::to_string(kApiSchemaVersion)}}};
  }
  if (format != "json") throw Error(ErrorKind::kUsage, "format must be json or csv");
  return ok(trajectory_to_json(it->second.trajectory));
}

std::string StudyService::report_body() const {
  std::vector<std::shared_ptr<LiveSession>> sessions;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [key, session] : by_pair_) sessions.push_back(session);
  }
  std::vector<study::SessionRecord> records;
  records.reserve(sessions.size());
  for (const auto& session : sessions) {
    std::lock_guard busy(session->busy);
    records.push_back(session->session.record());
  }
  return study::render_report(study::compute_report(records, plan_, config_.aggregator));
}

}  // namespace alignscope::service
