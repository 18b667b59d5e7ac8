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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiaszz {

/// Errors raised by repository access (clone, resolve, diff, blame).
class GitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A full 40-character lowercase hexadecimal git object id.
class CommitId {
 public:
  CommitId() = default;

  /// Throws std::invalid_argument unless `hex` is 40 hex chars.
  explicit CommitId(std::string_view hex);

  /// Non-throwing variant used when validating untrusted input.
  static std::optional<CommitId> parse(std::string_view hex);

  const std::string& str() const { return value_; }
  std::string abbrev() const { return value_.substr(0, 9); }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const CommitId&, const CommitId&) = default;

 private:
  std::string value_;
};

bool is_commit_hash(std::string_view hex);

struct CommitMeta {
  CommitId id;
  std::vector<CommitId> parents;
  std::int64_t author_time = 0;  // seconds UTC
  std::int64_t commit_time = 0;  // seconds UTC; ordering key everywhere
  std::string message;

  bool is_merge() const { return parents.size() > 1; }
  bool is_root() const { return parents.empty(); }
};

enum class ChangeKind { Added, Deleted, Modified, Renamed };

std::string_view to_string(ChangeKind kind);

/// One zero-context hunk: `old_count` lines replaced by `new_count` lines.
/// `line_tags` holds one character per changed line in patch order
/// ('-' lines first, then '+').
struct DiffHunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  std::string line_tags;
};

struct FileDiff {
  std::optional<std::string> old_path;
  std::optional<std::string> new_path;
  ChangeKind kind = ChangeKind::Modified;
  bool binary = false;
  bool submodule = false;
  std::vector<DiffHunk> hunks;

  /// Post-image identity; falls back to the old path for deletions.
  const std::string& identity_path() const {
    return new_path ? *new_path : *old_path;
  }
};

struct BlameAttribution {
  std::string file;
  int line = 0;  // 1-based at the blamed revision
  CommitId origin;
};

}  // namespace wiaszz
