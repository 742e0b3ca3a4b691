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

#include "alignscope/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alignscope/error.hpp"

namespace alignscope {
namespace {

using nlohmann::json;

std::string require_string(const json& object, const char* key,
                           std::string_view context) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string()) {
    throw Error(ErrorKind::kData, std::string(context) + ": missing string field '" +
                                      key + "'");
  }
  return it->get<std::string>();
}

std::size_t as_index(const json& value, std::string_view context) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(ErrorKind::kData,
                std::string(context) + ": marker index must be a non-negative integer");
  }
  return static_cast<std::size_t>(value.get<long long>());
}

}  // namespace

RawDialogue parse_dialogue_line(std::string_view line) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kData, "corpus line is not a JSON object");
  }
  RawDialogue dialogue;
  dialogue.dialogue_id = require_string(doc, "dialogue_id", "dialogue");
  const std::string context = "dialogue '" + dialogue.dialogue_id + "'";
  if (auto it = doc.find("label"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorKind::kData, context + ": label must be a string");
    dialogue.label = parse_label(it->get<std::string>());
    if (!dialogue.label) {
      throw Error(ErrorKind::kData, context + ": unknown label '" +
                                        it->get<std::string>() + "'");
    }
  }
  if (auto it = doc.find("initiator"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorKind::kData, context + ": initiator must be a string");
    dialogue.initiator = it->get<std::string>();
  }
  if (auto it = doc.find("scam_marker_index"); it != doc.end() && !it->is_null()) {
    dialogue.scam_marker = as_index(*it, context);
  }
  auto messages = doc.find("messages");
  if (messages == doc.end() || !messages->is_array()) {
    throw Error(ErrorKind::kData, context + ": missing 'messages' array");
  }
  dialogue.messages.reserve(messages->size());
  for (std::size_t i = 0; i < messages->size(); ++i) {
    const json& m = (*messages)[i];
    if (!m.is_object()) throw Error(ErrorKind::kData, context + ": message is not an object");
    Message message;
    message.speaker_id = require_string(m, "speaker", context);
    message.text = require_string(m, "text", context);
    message.sequence_index = i;
    if (auto ts = m.find("ts"); ts != m.end() && ts->is_string()) {
      message.timestamp = ts->get<std::string>();
    }
    dialogue.messages.push_back(std::move(message));
  }
  return dialogue;
}

std::vector<RawDialogue> read_corpus(std::istream& in) {
  std::vector<RawDialogue> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      corpus.push_back(parse_dialogue_line(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::kData,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

std::vector<RawDialogue> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kData, "cannot open corpus " + path.string());
  return read_corpus(in);
}

std::string dialogue_to_json_line(const RawDialogue& dialogue) {
  json doc = json::object();
  doc["dialogue_id"] = dialogue.dialogue_id;
  if (dialogue.label) doc["label"] = std::string(to_string(*dialogue.label));
  if (dialogue.initiator) doc["initiator"] = *dialogue.initiator;
  if (dialogue.scam_marker) doc["scam_marker_index"] = *dialogue.scam_marker;
  json messages = json::array();
  for (const Message& m : dialogue.messages) {
    json entry = {{"speaker", m.speaker_id}, {"text", m.text}};
    if (m.timestamp) entry["ts"] = *m.timestamp;
    messages.push_back(std::move(entry));
  }
  doc["messages"] = std::move(messages);
  return doc.dump();
}

void write_corpus(std::ostream& out, const std::vector<RawDialogue>& corpus) {
  for (const RawDialogue& dialogue : corpus) {
    out << dialogue_to_json_line(dialogue) << '\n';
  }
}

MarkerAnnotations parse_annotations(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kData, "annotations must be a JSON object");
  }
  MarkerAnnotations annotations;
  for (const auto& [id, value] : doc.items()) {
    annotations[id] = as_index(value, "annotation '" + id + "'");
  }
  return annotations;
}

MarkerAnnotations read_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kData, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace alignscope
