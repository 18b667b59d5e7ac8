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

#include "wiaszz/commit.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace wiaszz {

bool is_commit_hash(std::string_view hex) {
  if (hex.size() != 40) return false;
  return std::all_of(hex.begin(), hex.end(), [](unsigned char c) {
    return std::isxdigit(c) != 0;
  });
}

CommitId::CommitId(std::string_view hex) {
  if (!is_commit_hash(hex)) {
    throw std::invalid_argument(
        fmt::format("commit id must be 40 hex chars, got \"{}\"", hex));
  }
  value_.resize(hex.size());
  std::transform(hex.begin(), hex.end(), value_.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
}

std::optional<CommitId> CommitId::parse(std::string_view hex) {
  if (!is_commit_hash(hex)) return std::nullopt;
  return CommitId(hex);
}

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Added:
      return "added";
    case ChangeKind::Deleted:
      return "deleted";
    case ChangeKind::Modified:
      return "modified";
    case ChangeKind::Renamed:
      return "renamed";
  }
  return "unknown";
}

}  // namespace wiaszz
