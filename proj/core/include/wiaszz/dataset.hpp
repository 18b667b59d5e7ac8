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
#include <string>
#include <vector>

#include "wiaszz/commit.hpp"

namespace wiaszz {

enum class IssueDateKind { Real, Simulated };

std::string_view to_string(IssueDateKind kind);

/// One evaluation object: a fix commit with its oracle bug-inducing
/// commit(s) and, when known, the issue report date.
struct FixRecord {
  std::string id;
  std::string repo;  // local path or cloneable URL
  CommitId fc;
  std::vector<CommitId> oracle_bics;  // non-empty
  std::optional<std::int64_t> issue_date;
  IssueDateKind issue_date_kind = IssueDateKind::Real;
  std::optional<std::string> language;
};

/// How missing issue dates are simulated from the oracle interval.
struct OffsetMode {
  enum class Kind { Q2, Legacy, Custom };
  Kind kind = Kind::Q2;
  double custom = 0.93;

  double offset() const { return kind == Kind::Q2 ? 0.93 : custom; }
  static OffsetMode parse(std::string_view text);  // "q2" | "legacy" | number
  std::string str() const;
};

/// issue = bic_time + offset * (fc_time - bic_time), whole seconds, clamped
/// to [bic_time, fc_time]. Requires bic_time <= fc_time and offset in [0,1].
std::int64_t simulate_issue_date(std::int64_t bic_time, std::int64_t fc_time,
                                 double offset);

/// The pre-offset convention: sixty seconds after the bug-inducing commit.
std::int64_t simulate_issue_date_legacy(std::int64_t bic_time);

struct DatasetLoadResult {
  std::vector<FixRecord> records;
  std::vector<std::string> errors;  // one entry per rejected record
};

/// Dataset file: JSON array of objects with fields
/// {id, repo, fix_commit_hash, bug_commit_hashes[], issue_date?, language?}.
/// issue_date accepts epoch seconds or ISO-8601 UTC ("2021-03-04T05:06:07Z").
/// The exclusion list is newline-delimited record ids.
DatasetLoadResult load_dataset(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& exclusions = std::nullopt);

void save_dataset(const std::filesystem::path& path,
                  const std::vector<FixRecord>& records);

}  // namespace wiaszz
