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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wiaszz/dataset.hpp"
#include "wiaszz/method_extract.hpp"
#include "wiaszz/szz_baseline.hpp"
#include "wiaszz/tracking_matrix.hpp"

namespace wiaszz {

enum class FallbackKind { B, BLatest, BLargest };

std::string_view to_string(FallbackKind kind);
FallbackKind fallback_from_string(std::string_view text);

struct WiaConfig {
  Factor factor;                   // default 0.7
  int lookback_days = 30;          // mining window before the issue date
  FallbackKind fallback = FallbackKind::B;
  FilterConfig filters;            // issue filter on by default
  int max_commits = 10000;
};

enum class PredictionPath { WorkItem, Fallback };

std::string_view to_string(PredictionPath path);

struct BicPrediction {
  CommitId fc;
  PredictionPath path = PredictionPath::Fallback;
  std::vector<CommitId> candidates;  // exactly one on the work-item path
  // Mined work items (the fix commit's own row never counts).
  int work_item_count = 0;
  // Mined work items eligible for selection (pre-issue, inside the window).
  int pre_issue_work_item_count = 0;
  std::vector<std::string> diagnostics;
};

/// Runs the two-stage algorithm for one fix commit: mine work items from the
/// method-overlap matrix and pick the newest one before the issue date, or
/// fall back to the configured baseline when none qualifies.
///
/// `issue_date` may be absent only when the issue filter is disabled.
/// An issue date after the fix commit is flagged and routed to the fallback.
BicPrediction predict_bic(Repository& repo, const CommitId& fc,
                          std::optional<std::int64_t> issue_date,
                          const WiaConfig& config, MethodExtractor& extractor);

struct RecordResult {
  std::string record_id;
  std::optional<BicPrediction> prediction;
  std::optional<std::int64_t> issue_date;
  IssueDateKind issue_date_kind = IssueDateKind::Real;
  std::string error;  // non-empty when this record failed

  bool ok() const { return error.empty(); }
};

struct RunSummary {
  int part_a = 0;               // work-item-path predictions
  int part_b = 0;               // fallback-path predictions
  int errors = 0;
  int fcs_with_workitems = 0;   // >= 1 mined work item anywhere in history
  int fcs_with_pre_issue_workitems = 0;  // equals part_a
  long total_workitems = 0;     // mined items summed over part-A records
};

struct RunOutput {
  std::vector<RecordResult> results;  // input order
  RunSummary summary;
};

struct RunnerOptions {
  std::filesystem::path cache_dir;
  int parallelism = 1;
  OffsetMode offset;
  TestPathPolicy test_policy;
  DiagnosticsLog* diagnostics = nullptr;
  // Shared across calls to reuse change sets (factor sweeps).
  MethodExtractor* shared_extractor = nullptr;
};

/// One prediction per record, order preserved; per-record failures become
/// error entries and never abort the batch. Records without an issue date
/// get one simulated from the newest oracle commit at the configured offset.
RunOutput run_dataset(std::span<const FixRecord> records,
                      const WiaConfig& config, const RunnerOptions& options);

}  // namespace wiaszz
