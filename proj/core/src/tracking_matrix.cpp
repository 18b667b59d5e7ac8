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

#include "wiaszz/tracking_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace wiaszz {

Factor::Factor(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ <= 0 || num_ <= 0 || num_ > den_) {
    throw std::invalid_argument(
        fmt::format("factor must be in (0, 1], got {}/{}", num, den));
  }
  std::int64_t g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

Factor Factor::parse(std::string_view text) {
  size_t dot = text.find('.');
  std::string digits;
  std::int64_t den = 1;
  if (dot == std::string_view::npos) {
    digits = std::string(text);
  } else {
    digits = std::string(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 9) frac = frac.substr(0, 9);
    digits += frac;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  }
  std::int64_t num = 0;
  auto [ptr, ec] = std::from_chars(digits.data(),
                                   digits.data() + digits.size(), num);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument(
        fmt::format("cannot parse factor \"{}\"", text));
  }
  return Factor(num, den);
}

Factor Factor::from_double(double value) {
  auto num = static_cast<std::int64_t>(std::llround(value * 1e6));
  return Factor(num, 1000000);
}

std::string Factor::str() const {
  if (den_ == 1) return fmt::format("{}", num_);
  // Decimal expansion is exact: den_ divides a power of ten by construction.
  std::int64_t scale = 1;
  int places = 0;
  while (scale % den_ != 0) {
    scale *= 10;
    ++places;
  }
  std::int64_t scaled = num_ * (scale / den_);
  std::string frac = fmt::format("{:0{}}", scaled, places);
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return "0." + frac;
}

TrackingMatrix build_tracking_matrix(
    const MethodChangeSet& fc_changes,
    std::span<const MethodChangeSet> history) {
  if (fc_changes.methods.empty()) {
    throw EmptyChangeSetError(fmt::format(
        "fix commit {} has no modified methods; no tracking matrix",
        fc_changes.commit.str()));
  }

  TrackingMatrix matrix;
  matrix.fc = fc_changes.commit;
  matrix.columns.assign(fc_changes.methods.begin(), fc_changes.methods.end());

  for (const MethodChangeSet& entry : history) {
    if (entry.is_merge) continue;
    MatrixRow row;
    row.commit = entry.commit;
    row.commit_time = entry.commit_time;
    row.bits.resize(matrix.columns.size(), 0);
    for (size_t j = 0; j < matrix.columns.size(); ++j) {
      if (entry.methods.count(matrix.columns[j]) > 0) {
        row.bits[j] = 1;
        ++row.row_sum;
      }
    }
    matrix.rows.push_back(std::move(row));
  }
  std::stable_sort(matrix.rows.begin(), matrix.rows.end(),
                   [](const MatrixRow& a, const MatrixRow& b) {
                     if (a.commit_time != b.commit_time) {
                       return a.commit_time > b.commit_time;
                     }
                     return b.commit < a.commit;
                   });
  return matrix;
}

bool is_work_item(const TrackingMatrix& matrix, size_t row_index,
                  const Factor& factor) {
  if (row_index >= matrix.rows.size()) {
    throw std::out_of_range(fmt::format("row {} out of range ({} rows)",
                                        row_index, matrix.rows.size()));
  }
  const MatrixRow& row = matrix.rows[row_index];
  return factor.meets(row.row_sum,
                      static_cast<std::int64_t>(matrix.columns.size()));
}

WorkItemSet detect_work_items(const TrackingMatrix& matrix,
                              const Factor& factor) {
  WorkItemSet result;
  result.fc = matrix.fc;
  result.factor = factor;
  for (size_t i = 0; i < matrix.rows.size(); ++i) {
    if (is_work_item(matrix, i, factor)) {
      result.items.push_back(
          {matrix.rows[i].commit, matrix.rows[i].commit_time});
    }
  }
  return result;
}

std::optional<CommitId> select_bic_candidate(const WorkItemSet& items,
                                             std::int64_t issue_date,
                                             int lookback_days) {
  const std::int64_t window_low =
      issue_date - static_cast<std::int64_t>(lookback_days) * 86400;
  const WorkItem* best = nullptr;
  for (const WorkItem& item : items.items) {
    if (item.commit_time >= issue_date) continue;
    if (item.commit_time < window_low) continue;
    if (best == nullptr || item.commit_time > best->commit_time ||
        (item.commit_time == best->commit_time &&
         item.commit < best->commit)) {
      best = &item;
    }
  }
  if (best == nullptr) return std::nullopt;
  assert(best->commit_time < issue_date);
  return best->commit;
}

namespace {

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

std::string matrix_to_csv(const TrackingMatrix& matrix) {
  std::string out = "commit,commit_time";
  for (const MethodRef& column : matrix.columns) {
    out += ',';
    out += csv_escape(fmt::format("{}|{}|{}", column.file,
                                  column.qualified_name, column.arity));
  }
  out += '\n';
  for (const MatrixRow& row : matrix.rows) {
    out += fmt::format("{},{}", row.commit.str(), row.commit_time);
    for (std::uint8_t bit : row.bits) {
      out += bit != 0 ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

TrackingMatrix matrix_from_csv(std::string_view csv) {
  TrackingMatrix matrix;
  size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    size_t nl = csv.find('\n', pos);
    std::string_view line = csv.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    if (line.empty()) continue;

    auto fields = csv_split(line);
    if (header) {
      header = false;
      for (size_t i = 2; i < fields.size(); ++i) {
        const std::string& cell = fields[i];
        size_t last_bar = cell.rfind('|');
        size_t first_bar = cell.find('|');
        if (first_bar == std::string::npos || last_bar == first_bar) {
          throw std::invalid_argument(
              fmt::format("bad matrix column header: \"{}\"", cell));
        }
        MethodRef ref;
        ref.file = cell.substr(0, first_bar);
        ref.qualified_name =
            cell.substr(first_bar + 1, last_bar - first_bar - 1);
        int arity = 0;
        std::from_chars(cell.data() + last_bar + 1,
                        cell.data() + cell.size(), arity);
        ref.arity = arity;
        matrix.columns.push_back(std::move(ref));
      }
      continue;
    }

    if (fields.size() != matrix.columns.size() + 2) {
      throw std::invalid_argument("matrix row width mismatch");
    }
    MatrixRow row;
    row.commit = CommitId(fields[0]);
    std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(),
                    row.commit_time);
    for (size_t i = 2; i < fields.size(); ++i) {
      std::uint8_t bit = fields[i] == "1" ? 1 : 0;
      row.bits.push_back(bit);
      row.row_sum += bit;
    }
    matrix.rows.push_back(std::move(row));
  }
  if (!matrix.rows.empty()) matrix.fc = matrix.rows.front().commit;
  return matrix;
}

}  // namespace wiaszz
