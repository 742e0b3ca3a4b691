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

#include "alignscope/resources.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "alignscope/error.hpp"
#include "embedded_resources.hpp"

namespace alignscope {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length,
                 EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kInternal, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

Resource load_resource_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read resource " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Resource resource{path.filename().string(), buffer.str(), {}};
  resource.sha256 = sha256_hex(resource.content);
  return resource;
}

Resource load_resource(std::string_view name,
                       const std::optional<std::filesystem::path>& directory) {
  if (directory) return load_resource_file(*directory / std::string(name));
  std::optional<std::string_view> content = detail::embedded_resource(name);
  if (!content) {
    throw Error(ErrorKind::kConfig, "unknown resource '" + std::string(name) + "'");
  }
  Resource resource{std::string(name), std::string(*content), {}};
  resource.sha256 = sha256_hex(resource.content);
  return resource;
}

}  // namespace alignscope
