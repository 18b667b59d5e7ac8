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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wiaszz/commit.hpp"
#include "wiaszz/repository.hpp"

namespace wiaszz {

struct Candidate {
  CommitId commit;
  std::int64_t commit_time = 0;
  // Lines of this fix commit's analysis blamed on the candidate; the size
  // proxy used by the largest-candidate selector.
  int touched_line_count = 0;
};

/// Blame-derived candidates for one fix commit, ordered newest first
/// (ties: ascending commit id).
struct CandidateSet {
  CommitId fc;
  std::vector<Candidate> candidates;
};

struct FilterConfig {
  bool issue_filter_enabled = true;
  bool one_commit_filter_enabled = false;
  std::optional<std::int64_t> issue_date;
};

/// Blame-based baseline: every line deleted or modified by the fix commit is
/// blamed at its first parent; origin commits become candidates. Pure
/// insertions contribute nothing; root fix commits yield an empty set.
CandidateSet bszz_candidates(Repository& repo, const CommitId& fc);

/// Keeps candidates with commit_time strictly before the issue date.
CandidateSet apply_issue_filter(CandidateSet candidates,
                                std::int64_t issue_date);

/// The single candidate nearest before the issue date (ties: smallest id).
std::optional<CommitId> apply_one_commit_filter(const CandidateSet& candidates,
                                                std::int64_t issue_date);

/// Newest candidate by commit time (ties: smallest id).
std::optional<CommitId> select_latest(const CandidateSet& candidates);

/// Candidate with the most blamed lines (ties: newer, then smallest id).
std::optional<CommitId> select_largest(const CandidateSet& candidates);

/// CSV exchange format: fc,candidate,commit_time,touched_line_count.
/// Externally produced files (other SZZ variants) load into the same
/// filter/selector/scoring pipeline.
std::string candidates_to_csv(const std::vector<CandidateSet>& sets);
std::map<std::string, CandidateSet> candidates_from_csv(std::string_view csv);

}  // namespace wiaszz
