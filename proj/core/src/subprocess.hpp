// Copyright 2026 The wiaszz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace wiaszz::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

/// Runs `argv` with stdout/stderr captured. `extra_env` entries are set in
/// the child only. Throws std::runtime_error when the process cannot be
/// spawned at all; a nonzero exit is reported through the result.
ProcessResult run_process(
    const std::vector<std::string>& argv, const std::filesystem::path& cwd,
    const std::vector<std::pair<std::string, std::string>>& extra_env = {});

}  // namespace wiaszz::detail
