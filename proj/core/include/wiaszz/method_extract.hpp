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

#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "wiaszz/commit.hpp"
#include "wiaszz/repository.hpp"

namespace wiaszz {

/// Identity of one function/method: post-rename file path, enclosing
/// declaration chain joined with "::", and parameter count. A renamed method
/// is a different MethodRef.
struct MethodRef {
  std::string file;
  std::string qualified_name;
  int arity = 0;

  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
};

struct MethodChangeSet {
  CommitId commit;
  std::int64_t commit_time = 0;
  std::set<MethodRef> methods;  // ordered: (file, qualified_name, arity)
  bool is_merge = false;
};

/// Which paths count as test code and are excluded from change sets.
/// Built-in rules: any path segment equal to test/tests/spec/specs
/// (case-insensitive), or a filename stem with prefix "test_" or suffix
/// "_test", "Test", ".spec", ".test". `extra_patterns` adds fnmatch-style
/// globs checked against the full path and the basename.
struct TestPathPolicy {
  std::vector<std::string> extra_patterns;
};

bool is_test_path(std::string_view path, const TestPathPolicy& policy);

struct Diagnostic {
  std::string commit;
  std::string file;
  std::string reason;
};

/// Thread-safe per-run diagnostics collector.
class DiagnosticsLog {
 public:
  void add(std::string commit, std::string file, std::string reason);
  std::vector<Diagnostic> snapshot() const;
  size_t size() const;
  void write_jsonl(std::ostream& out) const;

 private:
  mutable std::mutex mutex_;
  std::vector<Diagnostic> entries_;
};

/// Computes per-commit modified-method sets, with an optional shared cache.
/// Parser failures skip the offending file and are recorded in the
/// diagnostics log; they never abort a commit.
class MethodExtractor {
 public:
  explicit MethodExtractor(TestPathPolicy policy = {},
                           DiagnosticsLog* diagnostics = nullptr)
      : policy_(std::move(policy)), diagnostics_(diagnostics) {}

  /// Methods whose signature or body span intersects a diff hunk in either
  /// the pre- or post-image (deleted methods come from the pre-image).
  /// Merge commits yield an empty set with is_merge = true.
  MethodChangeSet modified_methods(Repository& repo, const CommitId& commit);

  const TestPathPolicy& policy() const { return policy_; }
  DiagnosticsLog* diagnostics() const { return diagnostics_; }

 private:
  MethodChangeSet compute(Repository& repo, const CommitId& commit);

  TestPathPolicy policy_;
  DiagnosticsLog* diagnostics_;
  std::shared_mutex cache_mutex_;
  std::map<std::pair<std::string, std::string>, MethodChangeSet> cache_;
};

/// Single-shot variant without a cache.
MethodChangeSet modified_methods(Repository& repo, const CommitId& commit,
                                 const TestPathPolicy& policy,
                                 DiagnosticsLog* diagnostics = nullptr);

}  // namespace wiaszz
