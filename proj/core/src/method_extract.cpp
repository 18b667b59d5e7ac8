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

#include "wiaszz/method_extract.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "wiaszz/lang_scan.hpp"

#include "json.hpp"

namespace wiaszz {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

bool is_test_path(std::string_view path, const TestPathPolicy& policy) {
  // Path segments: test/tests/spec/specs, case-insensitive.
  size_t start = 0;
  std::string_view basename = path;
  while (start <= path.size()) {
    size_t slash = path.find('/', start);
    std::string_view segment = path.substr(
        start, slash == std::string_view::npos ? std::string_view::npos
                                               : slash - start);
    if (slash == std::string_view::npos) {
      basename = segment;
    } else {
      std::string lowered = to_lower(segment);
      if (lowered == "test" || lowered == "tests" || lowered == "spec" ||
          lowered == "specs") {
        return true;
      }
    }
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }

  // Filename stem rules. "contest.c" must not match "_test"/"Test".
  std::string_view stem = basename;
  if (size_t dot = stem.find_last_of('.'); dot != std::string_view::npos) {
    stem = stem.substr(0, dot);
  }
  if (to_lower(stem.substr(0, 5)) == "test_") return true;
  std::string stem_lower = to_lower(stem);
  if (ends_with(stem_lower, "_test")) return true;
  if (ends_with(stem, "Test")) return true;
  if (ends_with(stem_lower, ".spec") || ends_with(stem_lower, ".test")) {
    return true;
  }

  std::string path_str(path);
  std::string base_str(basename);
  for (const std::string& pattern : policy.extra_patterns) {
    if (::fnmatch(pattern.c_str(), path_str.c_str(), 0) == 0 ||
        ::fnmatch(pattern.c_str(), base_str.c_str(), 0) == 0) {
      return true;
    }
  }
  return false;
}

void DiagnosticsLog::add(std::string commit, std::string file,
                         std::string reason) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.push_back({std::move(commit), std::move(file), std::move(reason)});
}

std::vector<Diagnostic> DiagnosticsLog::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_;
}

size_t DiagnosticsLog::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

void DiagnosticsLog::write_jsonl(std::ostream& out) const {
  for (const Diagnostic& d : snapshot()) {
    nlohmann::json record = {
        {"commit", d.commit}, {"file", d.file}, {"reason", d.reason}};
    out << record.dump() << "\n";
  }
}

namespace {

struct SpanIndex {
  std::vector<MethodSpan> spans;

  void collect(int lo, int hi, const std::string& file,
               std::set<MethodRef>& out) const {
    for (const MethodSpan& span : spans) {
      if (span.start_line <= hi && lo <= span.end_line) {
        out.insert({file, span.qualified_name, span.arity});
      }
    }
  }
};

}  // namespace

MethodChangeSet MethodExtractor::modified_methods(Repository& repo,
                                                  const CommitId& commit) {
  const auto key = std::make_pair(repo.root().string(), commit.str());
  {
    std::shared_lock<std::shared_mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  MethodChangeSet result = compute(repo, commit);
  {
    std::unique_lock<std::shared_mutex> lock(cache_mutex_);
    cache_.emplace(key, result);
  }
  return result;
}

MethodChangeSet MethodExtractor::compute(Repository& repo,
                                         const CommitId& commit) {
  MethodChangeSet result;
  result.commit = commit;

  const CommitMeta& meta = repo.commit_meta(commit);
  result.commit_time = meta.commit_time;
  if (meta.is_merge()) {
    result.is_merge = true;
    return result;
  }

  for (const FileDiff& fd : repo.diff_commit(commit)) {
    if (!fd.old_path && !fd.new_path) continue;
    const std::string& identity = fd.identity_path();
    if (is_test_path(identity, policy_)) continue;
    auto lang = detect_language(identity);
    if (!lang) continue;
    if (fd.binary || fd.submodule || fd.hunks.empty()) continue;

    SpanIndex pre, post;
    ScanStats stats;
    try {
      if (fd.new_path && fd.kind != ChangeKind::Deleted) {
        post.spans =
            scan_methods(*lang, repo.file_at(commit, *fd.new_path), &stats);
      }
      if (fd.old_path && fd.kind != ChangeKind::Added && !meta.is_root()) {
        pre.spans = scan_methods(
            *lang, repo.file_at(meta.parents[0], *fd.old_path), &stats);
      }
    } catch (const GitError& e) {
      if (diagnostics_ != nullptr) {
        diagnostics_->add(commit.str(), identity,
                          fmt::format("parser input unavailable: {}",
                                      e.what()));
      }
      continue;
    }
    if (!stats.balanced && diagnostics_ != nullptr) {
      diagnostics_->add(commit.str(), identity,
                        "unbalanced delimiters, spans are best-effort");
    }
    if (stats.anonymous_functions > 0 && diagnostics_ != nullptr) {
      diagnostics_->add(commit.str(), identity,
                        fmt::format("{} anonymous function(s) excluded",
                                    stats.anonymous_functions));
    }

    for (const DiffHunk& hunk : fd.hunks) {
      if (hunk.new_count > 0) {
        post.collect(hunk.new_start, hunk.new_start + hunk.new_count - 1,
                     identity, result.methods);
      }
      if (hunk.old_count > 0) {
        pre.collect(hunk.old_start, hunk.old_start + hunk.old_count - 1,
                    identity, result.methods);
      }
    }
  }
  return result;
}

MethodChangeSet modified_methods(Repository& repo, const CommitId& commit,
                                 const TestPathPolicy& policy,
                                 DiagnosticsLog* diagnostics) {
  MethodExtractor extractor(policy, diagnostics);
  return extractor.modified_methods(repo, commit);
}

}  // namespace wiaszz
