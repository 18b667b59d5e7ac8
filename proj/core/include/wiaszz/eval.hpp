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

#include <span>
#include <string>
#include <vector>

#include "wiaszz/orchestrator.hpp"

namespace wiaszz {

/// Denominator for recall. TotalOracleBics counts every oracle commit across
/// records; PerRecord counts records (at most one hit per record).
enum class RecallDenominator { TotalOracleBics, PerRecord };

struct MetricsSummary {
  size_t n = 0;  // scored records
  long tp = 0;
  long fp = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  // False when no candidate was produced at all and precision is reported
  // as zero by convention.
  bool precision_defined = true;
};

/// A candidate is a true positive iff it appears in its record's oracle set;
/// counts aggregate over all candidates of all predictions. Empty or failed
/// predictions contribute nothing to TP/FP but their oracle commits still
/// count in the recall denominator.
MetricsSummary score(
    std::span<const RecordResult> results, std::span<const FixRecord> oracle,
    RecallDenominator denominator = RecallDenominator::TotalOracleBics);

struct SweepRow {
  Factor factor;
  int fcs_with_workitems = 0;  // records routed through the work-item path
  long total_workitems = 0;
  long tp = 0;
  long fp = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

/// Re-runs the dataset per factor, reusing extracted change sets (the matrix
/// itself is factor-independent, only the threshold varies).
std::vector<SweepRow> factor_sweep(std::span<const FixRecord> records,
                                   std::span<const Factor> factors,
                                   const WiaConfig& config,
                                   const RunnerOptions& options);

std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace wiaszz
