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

#include "wiaszz/orchestrator.hpp"

#include <atomic>
#include <cassert>
#include <thread>

#include <fmt/format.h>

namespace wiaszz {

std::string_view to_string(FallbackKind kind) {
  switch (kind) {
    case FallbackKind::B: return "b";
    case FallbackKind::BLatest: return "b-latest";
    case FallbackKind::BLargest: return "b-largest";
  }
  return "b";
}

FallbackKind fallback_from_string(std::string_view text) {
  if (text == "b") return FallbackKind::B;
  if (text == "b-latest") return FallbackKind::BLatest;
  if (text == "b-largest") return FallbackKind::BLargest;
  throw std::invalid_argument(
      fmt::format("unknown fallback \"{}\" (expected b|b-latest|b-largest)",
                  text));
}

std::string_view to_string(PredictionPath path) {
  return path == PredictionPath::WorkItem ? "work_item" : "fallback";
}

namespace {

BicPrediction run_fallback(Repository& repo, const CommitId& fc,
                           std::optional<std::int64_t> issue_date,
                           const WiaConfig& config, BicPrediction prediction) {
  prediction.path = PredictionPath::Fallback;
  CandidateSet candidates = bszz_candidates(repo, fc);
  if (config.filters.issue_filter_enabled && issue_date) {
    candidates = apply_issue_filter(std::move(candidates), *issue_date);
  }

  if (config.filters.one_commit_filter_enabled && issue_date) {
    if (auto single = apply_one_commit_filter(candidates, *issue_date)) {
      prediction.candidates.push_back(*single);
    }
    return prediction;
  }

  switch (config.fallback) {
    case FallbackKind::B:
      for (const Candidate& c : candidates.candidates) {
        prediction.candidates.push_back(c.commit);
      }
      break;
    case FallbackKind::BLatest:
      if (auto picked = select_latest(candidates)) {
        prediction.candidates.push_back(*picked);
      }
      break;
    case FallbackKind::BLargest:
      if (auto picked = select_largest(candidates)) {
        prediction.candidates.push_back(*picked);
      }
      break;
  }
  return prediction;
}

}  // namespace

BicPrediction predict_bic(Repository& repo, const CommitId& fc,
                          std::optional<std::int64_t> issue_date,
                          const WiaConfig& config,
                          MethodExtractor& extractor) {
  if (config.filters.issue_filter_enabled && !issue_date) {
    throw std::invalid_argument(
        "predict_bic: the issue filter requires an issue date");
  }

  BicPrediction prediction;
  prediction.fc = fc;

  const CommitMeta& fc_meta = repo.commit_meta(fc);

  // Real datasets contain issue dates recorded after the fix; those records
  // cannot anchor a mining window and go straight to the baseline.
  if (config.filters.issue_filter_enabled && issue_date &&
      *issue_date > fc_meta.commit_time) {
    prediction.diagnostics.push_back(fmt::format(
        "issue date {} is after the fix commit time {}; using fallback",
        *issue_date, fc_meta.commit_time));
    return run_fallback(repo, fc, issue_date, config, std::move(prediction));
  }

  MethodChangeSet fc_changes = extractor.modified_methods(repo, fc);
  if (fc_changes.methods.empty()) {
    prediction.diagnostics.push_back(
        fc_changes.is_merge
            ? "fix commit is a merge; no tracking matrix"
            : "fix commit has no modified methods (tests excluded); "
              "no tracking matrix");
    return run_fallback(repo, fc, issue_date, config, std::move(prediction));
  }

  const std::int64_t oldest =
      config.filters.issue_filter_enabled && issue_date
          ? *issue_date -
                static_cast<std::int64_t>(config.lookback_days) * 86400
          : 0;

  std::vector<MethodChangeSet> history;
  for (const CommitMeta& meta :
       repo.walk_history(fc, oldest, config.max_commits)) {
    history.push_back(extractor.modified_methods(repo, meta.id));
  }

  TrackingMatrix matrix = build_tracking_matrix(fc_changes, history);
  WorkItemSet items = detect_work_items(matrix, config.factor);

  // The fix commit's own row trivially satisfies the threshold; mined work
  // items are everything else.
  WorkItemSet mined;
  mined.fc = items.fc;
  mined.factor = items.factor;
  for (const WorkItem& item : items.items) {
    if (item.commit != fc) mined.items.push_back(item);
  }
  prediction.work_item_count = static_cast<int>(mined.items.size());

  std::optional<CommitId> selected;
  if (config.filters.issue_filter_enabled) {
    selected = select_bic_candidate(mined, *issue_date, config.lookback_days);
    for (const WorkItem& item : mined.items) {
      if (item.commit_time < *issue_date &&
          item.commit_time >=
              *issue_date -
                  static_cast<std::int64_t>(config.lookback_days) * 86400) {
        ++prediction.pre_issue_work_item_count;
      }
    }
  } else {
    // Without the issue filter: the first work item found walking back from
    // the fix commit, still exactly one candidate.
    const WorkItem* best = nullptr;
    for (const WorkItem& item : mined.items) {
      if (item.commit_time > fc_meta.commit_time) continue;  // clock skew
      if (best == nullptr || item.commit_time > best->commit_time ||
          (item.commit_time == best->commit_time &&
           item.commit < best->commit)) {
        best = &item;
      }
    }
    if (best != nullptr) selected = best->commit;
    prediction.pre_issue_work_item_count = prediction.work_item_count;
  }

  if (selected) {
    prediction.path = PredictionPath::WorkItem;
    prediction.candidates.push_back(*selected);
    assert(prediction.candidates.size() == 1);
    return prediction;
  }

  prediction.diagnostics.push_back(
      prediction.work_item_count == 0
          ? "no work items mined from history"
          : "work items exist but none precede the issue date inside the "
            "window");
  return run_fallback(repo, fc, issue_date, config, std::move(prediction));
}

RunOutput run_dataset(std::span<const FixRecord> records,
                      const WiaConfig& config, const RunnerOptions& options) {
  RunOutput output;
  output.results.resize(records.size());

  MethodExtractor local_extractor(options.test_policy, options.diagnostics);
  MethodExtractor* extractor = options.shared_extractor != nullptr
                                   ? options.shared_extractor
                                   : &local_extractor;

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t index = next.fetch_add(1);
      if (index >= records.size()) break;
      const FixRecord& record = records[index];
      RecordResult& result = output.results[index];
      result.record_id = record.id;
      try {
        Repository repo = Repository::open(record.repo, options.cache_dir);
        CommitId fc = repo.resolve(record.fc.str());

        std::optional<std::int64_t> issue_date = record.issue_date;
        result.issue_date_kind = record.issue_date_kind;
        if (!issue_date) {
          // Newest oracle commit anchors the simulation so every oracle
          // commit predates the simulated report.
          std::int64_t bic_time = 0;
          for (const CommitId& bic : record.oracle_bics) {
            bic_time =
                std::max(bic_time, repo.commit_meta(repo.resolve(bic.str()))
                                       .commit_time);
          }
          const std::int64_t fc_time = repo.commit_meta(fc).commit_time;
          if (options.offset.kind == OffsetMode::Kind::Legacy) {
            issue_date = simulate_issue_date_legacy(bic_time);
          } else {
            issue_date =
                simulate_issue_date(bic_time, fc_time,
                                    options.offset.offset());
          }
          result.issue_date_kind = IssueDateKind::Simulated;
        }
        result.issue_date = issue_date;
        result.prediction =
            predict_bic(repo, fc, issue_date, config, *extractor);
      } catch (const std::exception& e) {
        result.error = e.what();
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(options.parallelism,
                                static_cast<int>(records.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const RecordResult& result : output.results) {
    if (!result.ok()) {
      ++output.summary.errors;
      continue;
    }
    const BicPrediction& p = *result.prediction;
    if (p.work_item_count > 0) ++output.summary.fcs_with_workitems;
    if (p.path == PredictionPath::WorkItem) {
      ++output.summary.part_a;
      ++output.summary.fcs_with_pre_issue_workitems;
      output.summary.total_workitems += p.work_item_count;
    } else {
      ++output.summary.part_b;
    }
  }
  return output;
}

}  // namespace wiaszz
