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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wiaszz/method_extract.hpp"

namespace wiaszz {

/// Work-item threshold in (0, 1], kept as an exact decimal rational so the
/// `row_sum >= factor * N` comparison never rounds.
class Factor {
 public:
  Factor() : num_(7), den_(10) {}  // best-performing default
  Factor(std::int64_t num, std::int64_t den);

  /// Parses a decimal like "0.7" or "1" exactly.
  static Factor parse(std::string_view text);

  /// Snaps to six decimal places.
  static Factor from_double(double value);

  double value() const { return static_cast<double>(num_) / den_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  std::string str() const;

  /// Exact evaluation of `sum >= value * n`.
  bool meets(std::int64_t sum, std::int64_t n) const {
    return sum * den_ >= num_ * n;
  }

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator<(const Factor& a, const Factor& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

struct MatrixRow {
  CommitId commit;
  std::int64_t commit_time = 0;
  std::vector<std::uint8_t> bits;  // one per column
  int row_sum = 0;
};

/// Binary commit-by-method matrix rooted at a fix commit: columns are the
/// fix commit's modified methods, rows are historical commits (no merges),
/// ordered newest first (ties: descending commit id).
struct TrackingMatrix {
  CommitId fc;
  std::vector<MethodRef> columns;
  std::vector<MatrixRow> rows;
};

/// Raised when the fix commit has no modified methods, which prevents matrix
/// construction and routes the caller to the fallback path.
class EmptyChangeSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Builds the matrix from the fix commit's change set and its history
/// (newest first). Methods not modified by the fix commit are ignored;
/// merge entries produce no rows.
TrackingMatrix build_tracking_matrix(const MethodChangeSet& fc_changes,
                                     std::span<const MethodChangeSet> history);

/// Exact threshold predicate: row bit sum >= factor * column count.
bool is_work_item(const TrackingMatrix& matrix, size_t row_index,
                  const Factor& factor);

struct WorkItem {
  CommitId commit;
  std::int64_t commit_time = 0;
};

struct WorkItemSet {
  CommitId fc;
  Factor factor;
  std::vector<WorkItem> items;  // newest first
};

WorkItemSet detect_work_items(const TrackingMatrix& matrix,
                              const Factor& factor);

/// The newest work item strictly before `issue_date` and no older than
/// `lookback_days` before it; ties break toward the smallest commit id.
std::optional<CommitId> select_bic_candidate(const WorkItemSet& items,
                                             std::int64_t issue_date,
                                             int lookback_days);

/// CSV dump: header row of column methods, one row per commit.
std::string matrix_to_csv(const TrackingMatrix& matrix);
TrackingMatrix matrix_from_csv(std::string_view csv);

}  // namespace wiaszz
