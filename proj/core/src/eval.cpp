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

#include "wiaszz/eval.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace wiaszz {

MetricsSummary score(std::span<const RecordResult> results,
                     std::span<const FixRecord> oracle,
                     RecallDenominator denominator) {
  std::unordered_map<std::string, const FixRecord*> by_id;
  for (const FixRecord& record : oracle) {
    by_id.emplace(record.id, &record);
  }

  MetricsSummary summary;
  summary.n = results.size();
  long oracle_total = 0;
  long record_hits = 0;

  for (const RecordResult& result : results) {
    auto it = by_id.find(result.record_id);
    if (it == by_id.end()) {
      throw std::invalid_argument(fmt::format(
          "score: prediction id \"{}\" has no oracle record",
          result.record_id));
    }
    const FixRecord& record = *it->second;
    oracle_total += static_cast<long>(record.oracle_bics.size());

    if (!result.ok() || !result.prediction) continue;
    const std::set<CommitId> truth(record.oracle_bics.begin(),
                                   record.oracle_bics.end());
    bool hit = false;
    for (const CommitId& candidate : result.prediction->candidates) {
      if (truth.count(candidate) > 0) {
        ++summary.tp;
        hit = true;
      } else {
        ++summary.fp;
      }
    }
    if (hit) ++record_hits;
  }

  const long recall_denominator =
      denominator == RecallDenominator::TotalOracleBics
          ? oracle_total
          : static_cast<long>(results.size());
  const long hits = denominator == RecallDenominator::TotalOracleBics
                        ? summary.tp
                        : record_hits;
  summary.recall = recall_denominator > 0
                       ? static_cast<double>(hits) / recall_denominator
                       : 0.0;

  if (summary.tp + summary.fp > 0) {
    summary.precision =
        static_cast<double>(summary.tp) / (summary.tp + summary.fp);
  } else {
    summary.precision = 0.0;
    summary.precision_defined = false;
  }
  const double pr = summary.precision + summary.recall;
  summary.f1 = pr > 0.0 ? 2.0 * summary.precision * summary.recall / pr : 0.0;
  return summary;
}

std::vector<SweepRow> factor_sweep(std::span<const FixRecord> records,
                                   std::span<const Factor> factors,
                                   const WiaConfig& config,
                                   const RunnerOptions& options) {
  if (factors.empty()) {
    throw std::invalid_argument("factor_sweep: factors must be non-empty");
  }

  // Change sets dominate the cost and do not depend on the factor.
  MethodExtractor shared(options.test_policy, options.diagnostics);
  RunnerOptions sweep_options = options;
  if (sweep_options.shared_extractor == nullptr) {
    sweep_options.shared_extractor = &shared;
  }

  std::vector<SweepRow> rows;
  for (const Factor& factor : factors) {
    WiaConfig run_config = config;
    run_config.factor = factor;
    RunOutput output = run_dataset(records, run_config, sweep_options);
    MetricsSummary metrics = score(output.results, records);

    SweepRow row;
    row.factor = factor;
    row.fcs_with_workitems = output.summary.part_a;
    row.total_workitems = output.summary.total_workitems;
    row.tp = metrics.tp;
    row.fp = metrics.fp;
    row.recall = metrics.recall;
    row.precision = metrics.precision;
    row.f1 = metrics.f1;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::string out =
      "factor,fcs_with_workitems,total_workitems,tp,fp,recall,precision,f1\n";
  for (const SweepRow& row : rows) {
    out += fmt::format("{},{},{},{},{},{:.6f},{:.6f},{:.6f}\n",
                       row.factor.str(), row.fcs_with_workitems,
                       row.total_workitems, row.tp, row.fp, row.recall,
                       row.precision, row.f1);
  }
  return out;
}

}  // namespace wiaszz
