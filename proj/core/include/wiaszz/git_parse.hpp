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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wiaszz/commit.hpp"

namespace wiaszz {

/// Parses `git diff --unified=0 -M` patch text into per-file entries.
/// Handles rename headers, /dev/null sides, binary files, submodule
/// (gitlink) entries, and C-quoted paths.
std::vector<FileDiff> parse_unified_diff(std::string_view patch);

struct BlameLine {
  int final_line = 0;  // 1-based line number at the blamed revision
  std::string origin;  // 40-hex commit id
  std::int64_t committer_time = 0;
};

/// Parses `git blame --porcelain` output. Lines appear in output order.
std::vector<BlameLine> parse_blame_porcelain(std::string_view text);

/// Unescapes a C-quoted git path (`"a\tb"` style); returns input unchanged
/// when not quoted.
std::string unquote_git_path(std::string_view raw);

}  // namespace wiaszz
