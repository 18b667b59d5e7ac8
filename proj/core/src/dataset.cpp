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

#include "wiaszz/dataset.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace wiaszz {

std::string_view to_string(IssueDateKind kind) {
  return kind == IssueDateKind::Real ? "real" : "simulated";
}

OffsetMode OffsetMode::parse(std::string_view text) {
  OffsetMode mode;
  if (text == "q2" || text == "Q2") {
    mode.kind = Kind::Q2;
    return mode;
  }
  if (text == "legacy") {
    mode.kind = Kind::Legacy;
    return mode;
  }
  try {
    mode.kind = Kind::Custom;
    mode.custom = std::stod(std::string(text));
  } catch (const std::exception&) {
    throw std::invalid_argument(
        fmt::format("offset must be q2, legacy, or a number in [0,1]; got "
                    "\"{}\"",
                    text));
  }
  if (mode.custom < 0.0 || mode.custom > 1.0) {
    throw std::invalid_argument(
        fmt::format("custom offset must be in [0,1], got {}", mode.custom));
  }
  return mode;
}

std::string OffsetMode::str() const {
  switch (kind) {
    case Kind::Q2: return "q2";
    case Kind::Legacy: return "legacy";
    case Kind::Custom: return fmt::format("{}", custom);
  }
  return "q2";
}

std::int64_t simulate_issue_date(std::int64_t bic_time, std::int64_t fc_time,
                                 double offset) {
  if (bic_time > fc_time) {
    throw std::invalid_argument(fmt::format(
        "simulate_issue_date: bic_time {} is after fc_time {}", bic_time,
        fc_time));
  }
  if (offset < 0.0 || offset > 1.0) {
    throw std::invalid_argument(
        fmt::format("simulate_issue_date: offset must be in [0,1], got {}",
                    offset));
  }
  auto delta = static_cast<double>(fc_time - bic_time);
  std::int64_t simulated =
      bic_time + static_cast<std::int64_t>(std::llround(offset * delta));
  return std::clamp(simulated, bic_time, fc_time);
}

std::int64_t simulate_issue_date_legacy(std::int64_t bic_time) {
  return bic_time + 60;
}

namespace {

std::optional<std::int64_t> parse_iso8601(const std::string& text) {
  struct tm tm = {};
  const char* end = ::strptime(text.c_str(), "%Y-%m-%dT%H:%M:%S", &tm);
  if (end == nullptr) {
    end = ::strptime(text.c_str(), "%Y-%m-%d %H:%M:%S", &tm);
  }
  if (end == nullptr) return std::nullopt;
  return static_cast<std::int64_t>(::timegm(&tm));
}

std::set<std::string> load_exclusions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot read exclusion list: {}", path.string()));
  }
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::string id = line.substr(first);
    if (id.empty() || id[0] == '#') continue;
    ids.insert(std::move(id));
  }
  return ids;
}

}  // namespace

DatasetLoadResult load_dataset(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& exclusions) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot read dataset: {}", path.string()));
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(
        fmt::format("cannot parse dataset {}: {}", path.string(), e.what()));
  }
  if (!doc.is_array()) {
    throw std::runtime_error(
        fmt::format("dataset {} must be a JSON array", path.string()));
  }

  std::set<std::string> excluded;
  if (exclusions) excluded = load_exclusions(*exclusions);

  DatasetLoadResult result;
  size_t index = 0;
  for (const auto& entry : doc) {
    ++index;
    const std::string label = entry.contains("id") && entry["id"].is_string()
                                  ? entry["id"].get<std::string>()
                                  : fmt::format("#{}", index);
    auto reject = [&](std::string_view why) {
      result.errors.push_back(fmt::format("record {}: {}", label, why));
    };

    if (!entry.is_object()) {
      reject("not a JSON object");
      continue;
    }
    FixRecord record;
    if (!entry.contains("id") || !entry["id"].is_string() ||
        entry["id"].get<std::string>().empty()) {
      reject("missing id");
      continue;
    }
    record.id = entry["id"].get<std::string>();
    if (excluded.count(record.id) > 0) continue;

    if (!entry.contains("repo") || !entry["repo"].is_string() ||
        entry["repo"].get<std::string>().empty()) {
      reject("missing repo");
      continue;
    }
    record.repo = entry["repo"].get<std::string>();

    if (!entry.contains("fix_commit_hash") ||
        !entry["fix_commit_hash"].is_string()) {
      reject("missing fix_commit_hash");
      continue;
    }
    auto fc = CommitId::parse(entry["fix_commit_hash"].get<std::string>());
    if (!fc) {
      reject(fmt::format("fix_commit_hash must be 40 hex chars, got \"{}\"",
                         entry["fix_commit_hash"].get<std::string>()));
      continue;
    }
    record.fc = *fc;

    if (!entry.contains("bug_commit_hashes") ||
        !entry["bug_commit_hashes"].is_array() ||
        entry["bug_commit_hashes"].empty()) {
      reject("bug_commit_hashes must be a non-empty array");
      continue;
    }
    bool bad_bic = false;
    for (const auto& hash : entry["bug_commit_hashes"]) {
      if (!hash.is_string()) {
        bad_bic = true;
        break;
      }
      auto bic = CommitId::parse(hash.get<std::string>());
      if (!bic) {
        bad_bic = true;
        break;
      }
      record.oracle_bics.push_back(*bic);
    }
    if (bad_bic) {
      reject("bug_commit_hashes entries must be 40 hex chars");
      continue;
    }

    if (entry.contains("issue_date") && !entry["issue_date"].is_null()) {
      const auto& raw = entry["issue_date"];
      if (raw.is_number()) {
        record.issue_date = raw.get<std::int64_t>();
      } else if (raw.is_string()) {
        auto parsed = parse_iso8601(raw.get<std::string>());
        if (!parsed) {
          reject(fmt::format("cannot parse issue_date \"{}\"",
                             raw.get<std::string>()));
          continue;
        }
        record.issue_date = *parsed;
      } else {
        reject("issue_date must be epoch seconds or an ISO-8601 string");
        continue;
      }
      record.issue_date_kind = IssueDateKind::Real;
    }

    if (entry.contains("language") && entry["language"].is_string()) {
      record.language = entry["language"].get<std::string>();
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<FixRecord>& records) {
  nlohmann::json doc = nlohmann::json::array();
  for (const FixRecord& record : records) {
    nlohmann::json entry;
    entry["id"] = record.id;
    entry["repo"] = record.repo;
    entry["fix_commit_hash"] = record.fc.str();
    nlohmann::json bics = nlohmann::json::array();
    for (const CommitId& bic : record.oracle_bics) bics.push_back(bic.str());
    entry["bug_commit_hashes"] = std::move(bics);
    if (record.issue_date) entry["issue_date"] = *record.issue_date;
    if (record.language) entry["language"] = *record.language;
    doc.push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot write dataset: {}", path.string()));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace wiaszz
