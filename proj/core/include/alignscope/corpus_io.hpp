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

#ifndef ALIGNSCOPE_CORPUS_IO_HPP_
#define ALIGNSCOPE_CORPUS_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "alignscope/dialogue.hpp"

namespace alignscope {

// Corpus files are JSON Lines, one dialogue per line:
//   {"dialogue_id", "label"?, "initiator"?, "scam_marker_index"?,
//    "messages": [{"speaker", "text", "ts"?}]}
// Unknown fields are ignored. A message's sequence_index is its 0-based
// position in "messages".
RawDialogue parse_dialogue_line(std::string_view line);
std::vector<RawDialogue> read_corpus(std::istream& in);
std::vector<RawDialogue> read_corpus(const std::filesystem::path& path);

std::string dialogue_to_json_line(const RawDialogue& dialogue);
void write_corpus(std::ostream& out, const std::vector<RawDialogue>& corpus);

// Scam-marker annotations: a JSON object {dialogue_id: marker_index}.
using MarkerAnnotations = std::map<std::string, std::size_t>;
MarkerAnnotations read_annotations(const std::filesystem::path& path);
MarkerAnnotations parse_annotations(std::string_view json_text);

// Reads a whole file; throws Error(kData) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace alignscope

#endif  // ALIGNSCOPE_CORPUS_IO_HPP_
