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

#include <time.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "wiaszz/eval.hpp"
#include "wiaszz/git_parse.hpp"

namespace {

using nlohmann::json;
using namespace wiaszz;

struct CommonOpts {
  std::string factor = "0.7";
  int lookback_days = 30;
  std::string offset = "q2";
  std::string fallback = "b";
  bool issue_filter = true;
  bool one_commit_filter = false;
  int parallelism = 1;
  std::string cache_dir;
  int max_commits = 10000;
  std::vector<std::string> test_globs;
  std::string diagnostics_path;
};

std::string default_cache_dir() {
  if (const char* env = std::getenv("XDG_CACHE_HOME"); env != nullptr) {
    return std::string(env) + "/wiaszz";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr) {
    return std::string(home) + "/.cache/wiaszz";
  }
  return "./.wiaszz-cache";
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--factor", opts.factor, "Work-item threshold in (0,1]")
      ->capture_default_str();
  cmd->add_option("--lookback-days", opts.lookback_days,
                  "Mining window before the issue date, in days")
      ->capture_default_str();
  cmd->add_option("--offset", opts.offset,
                  "Issue date simulation: q2, legacy, or a number in [0,1]")
      ->capture_default_str();
  cmd->add_option("--fallback", opts.fallback,
                  "Baseline when no work item qualifies: b|b-latest|b-largest")
      ->capture_default_str();
  cmd->add_flag("--issue-filter,!--no-issue-filter", opts.issue_filter,
                "Drop candidates at or after the issue date (default on)");
  cmd->add_flag("--one-commit-filter", opts.one_commit_filter,
                "Reduce fallback candidates to the one nearest the issue date");
  cmd->add_option("--parallelism", opts.parallelism, "Worker threads")
      ->envname("WIASZZ_PARALLELISM")
      ->capture_default_str();
  cmd->add_option("--cache-dir", opts.cache_dir, "Clone cache directory")
      ->envname("WIASZZ_CACHE_DIR");
  cmd->add_option("--max-commits", opts.max_commits,
                  "History walk bound per fix commit")
      ->capture_default_str();
  cmd->add_option("--test-glob", opts.test_globs,
                  "Extra test-path glob (repeatable)");
  cmd->add_option("--diagnostics", opts.diagnostics_path,
                  "Write per-file skip diagnostics as JSON lines");
}

WiaConfig build_config(const CommonOpts& opts,
                       std::optional<std::int64_t> issue_date) {
  WiaConfig config;
  config.factor = Factor::parse(opts.factor);
  config.lookback_days = opts.lookback_days;
  config.fallback = fallback_from_string(opts.fallback);
  config.filters.issue_filter_enabled = opts.issue_filter;
  config.filters.one_commit_filter_enabled = opts.one_commit_filter;
  config.filters.issue_date = issue_date;
  config.max_commits = opts.max_commits;
  return config;
}

RunnerOptions build_runner(const CommonOpts& opts, DiagnosticsLog* log) {
  RunnerOptions runner;
  runner.cache_dir =
      opts.cache_dir.empty() ? default_cache_dir() : opts.cache_dir;
  runner.parallelism = opts.parallelism;
  runner.offset = OffsetMode::parse(opts.offset);
  runner.test_policy.extra_patterns = opts.test_globs;
  runner.diagnostics = log;
  return runner;
}

json config_json(const CommonOpts& opts) {
  return json{{"factor", opts.factor},
              {"lookback_days", opts.lookback_days},
              {"offset", opts.offset},
              {"fallback", opts.fallback},
              {"issue_filter", opts.issue_filter},
              {"one_commit_filter", opts.one_commit_filter},
              {"parallelism", opts.parallelism},
              {"max_commits", opts.max_commits},
              {"test_globs", opts.test_globs}};
}

std::optional<std::int64_t> parse_issue_date_arg(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    size_t used = 0;
    std::int64_t epoch = std::stoll(text, &used);
    if (used == text.size()) return epoch;
  } catch (const std::exception&) {
  }
  struct tm tm = {};
  if (::strptime(text.c_str(), "%Y-%m-%dT%H:%M:%S", &tm) != nullptr ||
      ::strptime(text.c_str(), "%Y-%m-%d %H:%M:%S", &tm) != nullptr ||
      ::strptime(text.c_str(), "%Y-%m-%d", &tm) != nullptr) {
    return static_cast<std::int64_t>(::timegm(&tm));
  }
  throw CLI::ValidationError("--issue-date",
                             "expected epoch seconds or ISO-8601 UTC");
}

void write_diagnostics(const CommonOpts& opts, const DiagnosticsLog& log) {
  if (opts.diagnostics_path.empty()) return;
  std::ofstream out(opts.diagnostics_path);
  log.write_jsonl(out);
}

json prediction_json(const RecordResult& result) {
  json entry;
  entry["id"] = result.record_id;
  if (result.issue_date) entry["issue_date"] = *result.issue_date;
  entry["issue_date_kind"] = std::string(to_string(result.issue_date_kind));
  if (!result.ok()) {
    entry["error"] = result.error;
    return entry;
  }
  const BicPrediction& p = *result.prediction;
  entry["fc"] = p.fc.str();
  entry["path"] = std::string(to_string(p.path));
  json candidates = json::array();
  for (const CommitId& c : p.candidates) candidates.push_back(c.str());
  entry["candidates"] = std::move(candidates);
  entry["work_item_count"] = p.work_item_count;
  entry["diagnostics"] = p.diagnostics;
  return entry;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::string predictions_csv(const std::vector<RecordResult>& results) {
  std::string out =
      "record_id,fc,path,candidates,work_item_count,diagnostics\n";
  for (const RecordResult& result : results) {
    std::string fc, path, candidates, diagnostics;
    std::string work_items = "0";
    if (result.ok() && result.prediction) {
      const BicPrediction& p = *result.prediction;
      fc = p.fc.str();
      path = std::string(to_string(p.path));
      for (const CommitId& c : p.candidates) {
        if (!candidates.empty()) candidates += ';';
        candidates += c.str();
      }
      work_items = fmt::format("{}", p.work_item_count);
      for (const std::string& d : p.diagnostics) {
        if (!diagnostics.empty()) diagnostics += ';';
        diagnostics += d;
      }
    } else {
      path = "error";
      diagnostics = result.error;
    }
    out += fmt::format("{},{},{},{},{},{}\n", csv_escape(result.record_id),
                       fc, path, csv_escape(candidates), work_items,
                       csv_escape(diagnostics));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_detect_wi(const CommonOpts& opts, const std::string& repo_arg,
                  const std::string& fc_arg, const std::string& issue_arg,
                  const std::string& dump_matrix) {
  DiagnosticsLog log;
  RunnerOptions runner = build_runner(opts, &log);
  Repository repo = Repository::open(repo_arg, runner.cache_dir);
  CommitId fc = repo.resolve(fc_arg);
  Factor factor = Factor::parse(opts.factor);

  MethodExtractor extractor(runner.test_policy, &log);
  MethodChangeSet fc_changes = extractor.modified_methods(repo, fc);
  if (fc_changes.methods.empty()) {
    fmt::print("fix commit {} has no modified methods; no tracking matrix\n",
               fc.abbrev());
    write_diagnostics(opts, log);
    return 0;
  }

  std::optional<std::int64_t> issue_date = parse_issue_date_arg(issue_arg);
  std::int64_t oldest =
      issue_date
          ? *issue_date - static_cast<std::int64_t>(opts.lookback_days) * 86400
          : 0;

  std::vector<MethodChangeSet> history;
  for (const CommitMeta& meta :
       repo.walk_history(fc, oldest, opts.max_commits)) {
    history.push_back(extractor.modified_methods(repo, meta.id));
  }
  TrackingMatrix matrix = build_tracking_matrix(fc_changes, history);
  WorkItemSet items = detect_work_items(matrix, factor);

  fmt::print("tracking matrix: {} methods x {} commits\n",
             matrix.columns.size(), matrix.rows.size());
  fmt::print("work items at factor {}:\n", factor.str());
  for (const WorkItem& item : items.items) {
    fmt::print("  {}  {}{}\n", item.commit.str(), item.commit_time,
               item.commit == fc ? "  (fix commit)" : "");
  }
  if (!dump_matrix.empty()) {
    std::ofstream out(dump_matrix);
    out << matrix_to_csv(matrix);
    fmt::print("matrix written to {}\n", dump_matrix);
  }
  write_diagnostics(opts, log);
  return 0;
}

int cmd_find_bic(const CommonOpts& opts, const std::string& repo_arg,
                 const std::string& fc_arg, const std::string& issue_arg,
                 const std::string& simulate_bic, bool as_json) {
  DiagnosticsLog log;
  RunnerOptions runner = build_runner(opts, &log);
  Repository repo = Repository::open(repo_arg, runner.cache_dir);
  CommitId fc = repo.resolve(fc_arg);

  std::optional<std::int64_t> issue_date = parse_issue_date_arg(issue_arg);
  IssueDateKind kind = IssueDateKind::Real;
  if (!issue_date && !simulate_bic.empty()) {
    CommitId bic = repo.resolve(simulate_bic);
    std::int64_t bic_time = repo.commit_meta(bic).commit_time;
    std::int64_t fc_time = repo.commit_meta(fc).commit_time;
    issue_date = runner.offset.kind == OffsetMode::Kind::Legacy
                     ? simulate_issue_date_legacy(bic_time)
                     : simulate_issue_date(bic_time, fc_time,
                                           runner.offset.offset());
    kind = IssueDateKind::Simulated;
  }
  if (!issue_date && opts.issue_filter) {
    fmt::print(stderr,
               "error: provide --issue-date, or --simulate <oracle-bic>, or "
               "--no-issue-filter\n");
    return 2;
  }

  WiaConfig config = build_config(opts, issue_date);
  MethodExtractor extractor(runner.test_policy, &log);
  BicPrediction prediction =
      predict_bic(repo, fc, issue_date, config, extractor);

  if (as_json) {
    RecordResult result;
    result.record_id = fc.str();
    result.prediction = prediction;
    result.issue_date = issue_date;
    result.issue_date_kind = kind;
    fmt::print("{}\n", prediction_json(result).dump());
  } else {
    std::string listed;
    for (const CommitId& c : prediction.candidates) {
      if (!listed.empty()) listed += ", ";
      listed += c.str();
    }
    fmt::print("{}: {}\n", to_string(prediction.path),
               listed.empty() ? "(none)" : listed);
    if (issue_date) {
      fmt::print("issue date: {} ({})\n", *issue_date, to_string(kind));
    }
    fmt::print("work items mined: {}\n", prediction.work_item_count);
    for (const std::string& d : prediction.diagnostics) {
      fmt::print("note: {}\n", d);
    }
  }
  write_diagnostics(opts, log);
  return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& dataset_path,
                 const std::string& exclusions, const std::string& out_metrics,
                 const std::string& out_predictions,
                 const std::string& out_jsonl, bool per_record_recall) {
  DiagnosticsLog log;
  RunnerOptions runner = build_runner(opts, &log);

  std::optional<std::filesystem::path> exclusion_path;
  if (!exclusions.empty()) exclusion_path = exclusions;
  DatasetLoadResult loaded = load_dataset(dataset_path, exclusion_path);
  for (const std::string& error : loaded.errors) {
    fmt::print(stderr, "dataset: {}\n", error);
  }

  WiaConfig config = build_config(opts, std::nullopt);
  RunOutput output = run_dataset(loaded.records, config, runner);
  MetricsSummary metrics =
      score(output.results, loaded.records,
            per_record_recall ? RecallDenominator::PerRecord
                              : RecallDenominator::TotalOracleBics);

  json doc;
  doc["config"] = config_json(opts);
  doc["n"] = metrics.n;
  doc["tp"] = metrics.tp;
  doc["fp"] = metrics.fp;
  doc["recall"] = metrics.recall;
  doc["precision"] = metrics.precision;
  doc["precision_defined"] = metrics.precision_defined;
  doc["f1"] = metrics.f1;
  doc["part_a"] = output.summary.part_a;
  doc["part_b"] = output.summary.part_b;
  doc["errors"] = output.summary.errors;
  doc["fcs_with_workitems"] = output.summary.fcs_with_workitems;
  doc["fcs_with_pre_issue_workitems"] =
      output.summary.fcs_with_pre_issue_workitems;
  doc["total_workitems"] = output.summary.total_workitems;
  doc["dataset_errors"] = loaded.errors;

  if (!out_metrics.empty()) {
    std::ofstream out(out_metrics);
    out << doc.dump(2) << "\n";
  }
  if (!out_predictions.empty()) {
    std::ofstream out(out_predictions);
    out << predictions_csv(output.results);
  }
  if (!out_jsonl.empty()) {
    std::ofstream out(out_jsonl);
    for (const RecordResult& result : output.results) {
      out << prediction_json(result).dump() << "\n";
    }
  }

  fmt::print(
      "records: {}  part A (work items): {}  part B (fallback): {}  "
      "errors: {}\n",
      metrics.n, output.summary.part_a, output.summary.part_b,
      output.summary.errors);
  fmt::print(
      "fix commits with mined work items: {}  with pre-issue work items: {}  "
      "(gap: {})\n",
      output.summary.fcs_with_workitems,
      output.summary.fcs_with_pre_issue_workitems,
      output.summary.fcs_with_workitems -
          output.summary.fcs_with_pre_issue_workitems);
  fmt::print(
      "tp: {}  fp: {}  recall: {:.3f}  precision: {:.3f}{}  f1: {:.3f}\n",
      metrics.tp, metrics.fp, metrics.recall, metrics.precision,
      metrics.precision_defined ? "" : " (no predictions)", metrics.f1);
  write_diagnostics(opts, log);
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& dataset_path,
              const std::string& exclusions, const std::string& factors_arg,
              const std::string& out_csv) {
  DiagnosticsLog log;
  RunnerOptions runner = build_runner(opts, &log);

  std::optional<std::filesystem::path> exclusion_path;
  if (!exclusions.empty()) exclusion_path = exclusions;
  DatasetLoadResult loaded = load_dataset(dataset_path, exclusion_path);
  for (const std::string& error : loaded.errors) {
    fmt::print(stderr, "dataset: {}\n", error);
  }

  std::vector<Factor> factors;
  size_t start = 0;
  while (start <= factors_arg.size()) {
    size_t comma = factors_arg.find(',', start);
    std::string piece = factors_arg.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) factors.push_back(Factor::parse(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (factors.empty()) {
    fmt::print(stderr, "error: --factors must list at least one value\n");
    return 2;
  }

  WiaConfig config = build_config(opts, std::nullopt);
  std::vector<SweepRow> rows =
      factor_sweep(loaded.records, factors, config, runner);

  std::string csv = "# config: " + config_json(opts).dump() + "\n";
  csv += sweep_to_csv(rows);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    out << csv;
  }
  fmt::print("{}", csv);
  write_diagnostics(opts, log);
  return 0;
}

int cmd_score_candidates(const CommonOpts& opts,
                         const std::string& dataset_path,
                         const std::string& candidates_path,
                         const std::string& selector,
                         const std::string& out_metrics) {
  DatasetLoadResult loaded = load_dataset(dataset_path);
  for (const std::string& error : loaded.errors) {
    fmt::print(stderr, "dataset: {}\n", error);
  }

  std::ifstream in(candidates_path);
  if (!in) {
    fmt::print(stderr, "error: cannot read {}\n", candidates_path);
    return 2;
  }
  std::string csv((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  auto sets = candidates_from_csv(csv);

  DiagnosticsLog log;
  RunnerOptions runner = build_runner(opts, &log);

  std::vector<RecordResult> results;
  for (const FixRecord& record : loaded.records) {
    RecordResult result;
    result.record_id = record.id;
    BicPrediction prediction;
    prediction.fc = record.fc;
    prediction.path = PredictionPath::Fallback;

    std::optional<std::int64_t> issue_date = record.issue_date;
    result.issue_date_kind = record.issue_date_kind;
    if (!issue_date && (opts.issue_filter || opts.one_commit_filter)) {
      try {
        Repository repo = Repository::open(record.repo, runner.cache_dir);
        std::int64_t bic_time = 0;
        for (const CommitId& bic : record.oracle_bics) {
          bic_time = std::max(
              bic_time,
              repo.commit_meta(repo.resolve(bic.str())).commit_time);
        }
        std::int64_t fc_time =
            repo.commit_meta(repo.resolve(record.fc.str())).commit_time;
        issue_date = runner.offset.kind == OffsetMode::Kind::Legacy
                         ? simulate_issue_date_legacy(bic_time)
                         : simulate_issue_date(bic_time, fc_time,
                                               runner.offset.offset());
        result.issue_date_kind = IssueDateKind::Simulated;
      } catch (const std::exception& e) {
        result.error = e.what();
        results.push_back(std::move(result));
        continue;
      }
    }
    result.issue_date = issue_date;

    auto it = sets.find(record.fc.str());
    CandidateSet set = it != sets.end() ? it->second : CandidateSet{};
    set.fc = record.fc;
    if (opts.issue_filter && issue_date) {
      set = apply_issue_filter(std::move(set), *issue_date);
    }
    if (opts.one_commit_filter && issue_date) {
      if (auto single = apply_one_commit_filter(set, *issue_date)) {
        prediction.candidates.push_back(*single);
      }
    } else if (selector == "latest") {
      if (auto picked = select_latest(set)) {
        prediction.candidates.push_back(*picked);
      }
    } else if (selector == "largest") {
      if (auto picked = select_largest(set)) {
        prediction.candidates.push_back(*picked);
      }
    } else {
      for (const Candidate& c : set.candidates) {
        prediction.candidates.push_back(c.commit);
      }
    }
    result.prediction = std::move(prediction);
    results.push_back(std::move(result));
  }

  MetricsSummary metrics = score(results, loaded.records);
  json doc;
  doc["config"] = config_json(opts);
  doc["selector"] = selector.empty() ? "all" : selector;
  doc["n"] = metrics.n;
  doc["tp"] = metrics.tp;
  doc["fp"] = metrics.fp;
  doc["recall"] = metrics.recall;
  doc["precision"] = metrics.precision;
  doc["precision_defined"] = metrics.precision_defined;
  doc["f1"] = metrics.f1;
  if (!out_metrics.empty()) {
    std::ofstream out(out_metrics);
    out << doc.dump(2) << "\n";
  }
  fmt::print("{}\n", doc.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work-item-aware bug-inducing-commit identification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a config file");

  CommonOpts opts;

  auto* detect = app.add_subcommand(
      "detect-wi", "Print the tracking matrix and work items for one commit");
  std::string repo_arg, fc_arg, issue_arg, dump_matrix;
  detect->add_option("--repo", repo_arg, "Repository path or URL")->required();
  detect->add_option("--fc", fc_arg, "Fix commit hash")->required();
  detect->add_option("--issue-date", issue_arg,
                     "Bound the mining window (epoch or ISO-8601)");
  detect->add_option("--dump-matrix", dump_matrix,
                     "Write the tracking matrix as CSV");
  add_common(detect, opts);

  auto* find = app.add_subcommand(
      "find-bic", "Predict the bug-inducing commit for one fix commit");
  std::string find_repo, find_fc, find_issue, simulate_bic;
  bool find_json = false;
  find->add_option("--repo", find_repo, "Repository path or URL")->required();
  find->add_option("--fc", find_fc, "Fix commit hash")->required();
  find->add_option("--issue-date", find_issue,
                   "Issue report date (epoch or ISO-8601)");
  find->add_option("--simulate", simulate_bic,
                   "Simulate the issue date from this oracle commit");
  find->add_flag("--json", find_json, "Emit one JSON object");
  add_common(find, opts);

  auto* evaluate = app.add_subcommand(
      "evaluate", "Run a dataset and score predictions against the oracle");
  std::string dataset_path, exclusions, out_metrics = "metrics.json";
  std::string out_predictions = "predictions.csv", out_jsonl;
  bool per_record_recall = false;
  evaluate->add_option("--dataset", dataset_path, "Dataset JSON file")
      ->required();
  evaluate->add_option("--exclusions", exclusions,
                       "Newline-delimited record ids to drop");
  evaluate->add_option("--out-metrics", out_metrics, "Metrics JSON path")
      ->capture_default_str();
  evaluate
      ->add_option("--out-predictions", out_predictions,
                   "Predictions CSV path")
      ->capture_default_str();
  evaluate->add_option("--out-jsonl", out_jsonl,
                       "Line-delimited prediction records");
  evaluate->add_flag("--per-record-recall", per_record_recall,
                     "Recall counts records instead of oracle commits");
  add_common(evaluate, opts);

  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate a list of factors and tabulate the metrics");
  std::string sweep_dataset, sweep_exclusions, factors_arg = "0.3,0.5,0.7,0.9";
  std::string sweep_out = "sweep.csv";
  sweep->add_option("--dataset", sweep_dataset, "Dataset JSON file")
      ->required();
  sweep->add_option("--exclusions", sweep_exclusions,
                    "Newline-delimited record ids to drop");
  sweep->add_option("--factors", factors_arg, "Comma-separated factor list")
      ->capture_default_str();
  sweep->add_option("--out-csv", sweep_out, "Sweep table path")
      ->capture_default_str();
  add_common(sweep, opts);

  auto* score_cmd = app.add_subcommand(
      "score-candidates",
      "Score externally produced candidate CSVs with the same filters");
  std::string cand_dataset, cand_path, cand_selector, cand_out;
  score_cmd->add_option("--dataset", cand_dataset, "Dataset JSON file")
      ->required();
  score_cmd
      ->add_option("--candidates", cand_path,
                   "CSV: fc,candidate,commit_time,touched_line_count")
      ->required();
  score_cmd->add_option("--select", cand_selector,
                        "Optional selector: latest|largest");
  score_cmd->add_option("--out-metrics", cand_out, "Metrics JSON path");
  add_common(score_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect->parsed()) {
      return cmd_detect_wi(opts, repo_arg, fc_arg, issue_arg, dump_matrix);
    }
    if (find->parsed()) {
      return cmd_find_bic(opts, find_repo, find_fc, find_issue, simulate_bic,
                          find_json);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(opts, dataset_path, exclusions, out_metrics,
                          out_predictions, out_jsonl, per_record_recall);
    }
    if (sweep->parsed()) {
      return cmd_sweep(opts, sweep_dataset, sweep_exclusions, factors_arg,
                       sweep_out);
    }
    if (score_cmd->parsed()) {
      return cmd_score_candidates(opts, cand_dataset, cand_path,
                                  cand_selector, cand_out);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
