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
#include <map>
#include <string>
#include <vector>

#include "wiaszz/commit.hpp"

namespace wiaszz::testing {

/// Builds throwaway git repositories with controlled committer timestamps.
/// Commits are deterministic given identical content and times.
class FixtureRepo {
 public:
  static FixtureRepo init(const std::filesystem::path& dir);

  const std::filesystem::path& root() const { return root_; }

  void write(const std::string& rel_path, const std::string& content);
  void append(const std::string& rel_path, const std::string& content);
  void remove(const std::string& rel_path);
  void move(const std::string& from, const std::string& to);

  /// Replaces the first occurrence of `needle` in the file.
  void edit(const std::string& rel_path, const std::string& needle,
            const std::string& replacement);

  /// Inserts `lines` directly after the first line containing `anchor`.
  void insert_after(const std::string& rel_path, const std::string& anchor,
                    const std::string& lines);

  CommitId commit(const std::string& message, std::int64_t time);

  void branch(const std::string& name);
  void checkout(const std::string& ref);
  CommitId merge(const std::string& branch, const std::string& message,
                 std::int64_t time);

  CommitId commit_by_message(const std::string& message) const;

 private:
  explicit FixtureRepo(std::filesystem::path root) : root_(std::move(root)) {}
  std::string git(const std::vector<std::string>& args,
                  std::int64_t time = 0) const;

  std::filesystem::path root_;
};

/// Unique scratch directory under the build tree, removed lazily by the OS.
std::filesystem::path scratch_dir(const std::string& label);

/// A seven-commit linear repository with three tracked functions in
/// src/core.c. Newest to oldest the commits are named a..g; `a` modifies
/// all of mx/my/mz, `b` the same plus an extra function, `c` only my,
/// `d` my and mz, `e` an unrelated function, `f` and `g` all three
/// (g creates the file). Committer times ascend by `step` from `base`.
struct LinearFixture {
  std::filesystem::path root;
  std::map<std::string, CommitId> by_name;  // "a".."g"
  std::map<std::string, std::int64_t> time_by_name;
};

LinearFixture make_linear_fixture(const std::filesystem::path& dir,
                                  std::int64_t base = 1600000000,
                                  std::int64_t step = 600);

}  // namespace wiaszz::testing
