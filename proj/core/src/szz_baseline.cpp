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

#include "wiaszz/szz_baseline.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

namespace wiaszz {

namespace {

void sort_candidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.commit_time != b.commit_time) {
                return a.commit_time > b.commit_time;
              }
              return a.commit < b.commit;
            });
}

}  // namespace

CandidateSet bszz_candidates(Repository& repo, const CommitId& fc) {
  CandidateSet result;
  result.fc = fc;

  const CommitMeta& meta = repo.commit_meta(fc);
  if (meta.is_root()) return result;
  const CommitId& parent = meta.parents[0];

  std::unordered_map<std::string, Candidate> by_origin;
  for (const FileDiff& fd : repo.diff_commit(fc)) {
    if (fd.binary || fd.submodule || !fd.old_path) continue;
    std::vector<int> old_lines;
    for (const DiffHunk& hunk : fd.hunks) {
      for (int i = 0; i < hunk.old_count; ++i) {
        old_lines.push_back(hunk.old_start + i);
      }
    }
    if (old_lines.empty()) continue;  // pure insertion: nothing to trace

    auto blame = repo.blame_with_times(parent, *fd.old_path, old_lines);
    for (const BlameAttribution& attr : blame.lines) {
      Candidate& cand = by_origin[attr.origin.str()];
      if (cand.touched_line_count == 0) {
        cand.commit = attr.origin;
        auto it = blame.origin_times.find(attr.origin.str());
        cand.commit_time =
            it != blame.origin_times.end() ? it->second : 0;
      }
      cand.touched_line_count += 1;
    }
  }

  result.candidates.reserve(by_origin.size());
  for (auto& [_, cand] : by_origin) {
    result.candidates.push_back(std::move(cand));
  }
  sort_candidates(result.candidates);
  return result;
}

CandidateSet apply_issue_filter(CandidateSet candidates,
                                std::int64_t issue_date) {
  std::erase_if(candidates.candidates, [issue_date](const Candidate& c) {
    return c.commit_time >= issue_date;
  });
  return candidates;
}

std::optional<CommitId> apply_one_commit_filter(const CandidateSet& candidates,
                                                std::int64_t issue_date) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates.candidates) {
    if (c.commit_time >= issue_date) continue;
    if (best == nullptr || c.commit_time > best->commit_time ||
        (c.commit_time == best->commit_time && c.commit < best->commit)) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->commit;
}

std::optional<CommitId> select_latest(const CandidateSet& candidates) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates.candidates) {
    if (best == nullptr || c.commit_time > best->commit_time ||
        (c.commit_time == best->commit_time && c.commit < best->commit)) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->commit;
}

std::optional<CommitId> select_largest(const CandidateSet& candidates) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates.candidates) {
    if (best == nullptr || c.touched_line_count > best->touched_line_count ||
        (c.touched_line_count == best->touched_line_count &&
         (c.commit_time > best->commit_time ||
          (c.commit_time == best->commit_time && c.commit < best->commit)))) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->commit;
}

std::string candidates_to_csv(const std::vector<CandidateSet>& sets) {
  std::string out = "fc,candidate,commit_time,touched_line_count\n";
  for (const CandidateSet& set : sets) {
    for (const Candidate& c : set.candidates) {
      out += fmt::format("{},{},{},{}\n", set.fc.str(), c.commit.str(),
                         c.commit_time, c.touched_line_count);
    }
  }
  return out;
}

std::map<std::string, CandidateSet> candidates_from_csv(std::string_view csv) {
  std::map<std::string, CandidateSet> sets;
  size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    size_t nl = csv.find('\n', pos);
    std::string_view line = csv.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.substr(0, 3) == "fc,") continue;  // header row optional
    }

    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
      size_t comma = line.find(',', start);
      fields.push_back(line.substr(
          start,
          comma == std::string_view::npos ? std::string_view::npos
                                          : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      throw std::invalid_argument(
          fmt::format("bad candidate CSV row: \"{}\"", line));
    }
    Candidate cand;
    cand.commit = CommitId(fields[1]);
    std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(),
                    cand.commit_time);
    std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(),
                    cand.touched_line_count);

    CandidateSet& set = sets[std::string(fields[0])];
    set.fc = CommitId(fields[0]);
    set.candidates.push_back(std::move(cand));
  }
  for (auto& [_, set] : sets) {
    sort_candidates(set.candidates);
  }
  return sets;
}

}  // namespace wiaszz
