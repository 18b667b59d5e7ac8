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
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "wiaszz/commit.hpp"

namespace wiaszz {

/// Read-only handle over a local clone. Remote sources are cloned once into
/// `cache_dir/<url-hash>/` and reused by later opens; the initial clone is
/// guarded by a per-URL file lock so parallel workers do not race.
///
/// A handle is confined to one worker at a time (it keeps an unsynchronized
/// metadata cache); open one handle per worker.
class Repository {
 public:
  /// `source` is a local path or a cloneable URL (https://, git://, ssh://,
  /// file://, scp-like). Local paths are opened in place.
  static Repository open(const std::string& source,
                         const std::filesystem::path& cache_dir);

  static Repository open_local(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  CommitId head() const;
  CommitId resolve(const std::string& refish) const;
  const CommitMeta& commit_meta(const CommitId& id) const;

  /// First-parent ancestors of `start`, newest first, `start` included.
  /// Stops before the first commit with commit_time < oldest_time, and
  /// after max_commits entries. Merge commits are included (flagged via
  /// CommitMeta::is_merge).
  std::vector<CommitMeta> walk_history(const CommitId& start,
                                       std::int64_t oldest_time,
                                       int max_commits) const;

  /// Diff against the first parent (the empty tree for root commits), with
  /// rename detection at the default similarity threshold. Binary files
  /// yield an entry with empty hunks.
  std::vector<FileDiff> diff_commit(const CommitId& commit) const;

  struct BlameResult {
    std::vector<BlameAttribution> lines;
    // Committer time per origin hex id, from the same porcelain stream.
    std::unordered_map<std::string, std::int64_t> origin_times;
  };

  /// Blames the requested 1-based lines of `file` at revision `at`.
  /// Exact line matching, no whitespace normalization.
  std::vector<BlameAttribution> blame_lines(const CommitId& at,
                                            const std::string& file,
                                            const std::vector<int>& lines) const;

  BlameResult blame_with_times(const CommitId& at, const std::string& file,
                               const std::vector<int>& lines) const;

  /// Blob content of `path` at `commit`.
  std::string file_at(const CommitId& commit, const std::string& path) const;

  bool is_ancestor(const CommitId& ancestor, const CommitId& descendant) const;

 private:
  explicit Repository(std::filesystem::path root) : root_(std::move(root)) {}

  struct Output {
    int exit_code = 0;
    std::string out;
    std::string err;
  };
  Output git(const std::vector<std::string>& args) const;
  Output git_checked(const std::vector<std::string>& args,
                     std::string_view action) const;
  const std::string& empty_tree() const;

  std::filesystem::path root_;
  mutable std::string empty_tree_;
  mutable std::unordered_map<std::string, CommitMeta> meta_cache_;
};

/// Stable hex digest used for clone cache directory names.
std::string url_cache_key(std::string_view url);

bool looks_like_remote_url(std::string_view source);

}  // namespace wiaszz
