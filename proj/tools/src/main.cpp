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

#include <iostream>

#include "common.hpp"

int main(int argc, char** argv) {
  using namespace alignscope;
  CLI::App app{"alignscope: conversational alignment analysis and hint study toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "alignscope 0.1.0");
  cli::register_corpus_commands(app);
  cli::register_study_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  } catch (const Error& e) {
    std::cerr << "alignscope: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "alignscope: internal error: " << e.what() << '\n';
    return cli::kExitInternal;
  }
  return cli::kExitOk;
}
