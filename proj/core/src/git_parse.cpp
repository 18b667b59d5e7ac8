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

#include "wiaszz/git_parse.hpp"

#include <charconv>
#include <unordered_map>

namespace wiaszz {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string_view next_line(std::string_view text, size_t& pos) {
  size_t start = pos;
  size_t nl = text.find('\n', start);
  if (nl == std::string_view::npos) {
    pos = text.size();
    return text.substr(start);
  }
  pos = nl + 1;
  return text.substr(start, nl - start);
}

int to_int(std::string_view s, int fallback = 0) {
  int value = fallback;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

std::int64_t to_i64(std::string_view s) {
  std::int64_t value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

// "-l[,c]" or "+l[,c]" from a @@ header.
void parse_range(std::string_view token, int& start, int& count) {
  token.remove_prefix(1);  // sign
  size_t comma = token.find(',');
  if (comma == std::string_view::npos) {
    start = to_int(token);
    count = 1;
  } else {
    start = to_int(token.substr(0, comma));
    count = to_int(token.substr(comma + 1));
  }
}

std::optional<std::string> strip_prefix_path(std::string_view raw) {
  std::string path = unquote_git_path(raw);
  if (path == "/dev/null") return std::nullopt;
  // a/ or b/ prefix from the patch header.
  if (path.size() > 2 && path[1] == '/' && (path[0] == 'a' || path[0] == 'b')) {
    return path.substr(2);
  }
  return path;
}

// Splits the remainder of a "diff --git a/X b/Y" line. Quoted paths are
// unambiguous; unquoted ones are split at the last " b/" occurrence.
void parse_diff_git_paths(std::string_view rest, std::string& old_path,
                          std::string& new_path) {
  if (!rest.empty() && rest.front() == '"') {
    size_t i = 1;
    bool escaped = false;
    for (; i < rest.size(); ++i) {
      if (escaped) {
        escaped = false;
      } else if (rest[i] == '\\') {
        escaped = true;
      } else if (rest[i] == '"') {
        break;
      }
    }
    std::string_view first = rest.substr(0, i + 1);
    old_path = unquote_git_path(first);
    std::string_view second = rest.substr(std::min(rest.size(), i + 2));
    new_path = unquote_git_path(second);
  } else {
    size_t split = rest.rfind(" b/");
    if (split == std::string_view::npos) {
      old_path = std::string(rest);
      new_path = std::string(rest);
    } else {
      old_path = std::string(rest.substr(0, split));
      new_path = std::string(rest.substr(split + 1));
    }
  }
  if (starts_with(old_path, "a/")) old_path.erase(0, 2);
  if (starts_with(new_path, "b/")) new_path.erase(0, 2);
}

constexpr std::string_view kGitlinkMode = "160000";

}  // namespace

std::string unquote_git_path(std::string_view raw) {
  if (raw.size() < 2 || raw.front() != '"') return std::string(raw);
  std::string out;
  out.reserve(raw.size());
  size_t i = 1;
  while (i < raw.size() && raw[i] != '"') {
    char c = raw[i++];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i >= raw.size()) break;
    char e = raw[i++];
    switch (e) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'v': out.push_back('\v'); break;
      case '\\': out.push_back('\\'); break;
      case '"': out.push_back('"'); break;
      default:
        if (e >= '0' && e <= '7') {
          int value = e - '0';
          for (int digits = 1;
               digits < 3 && i < raw.size() && raw[i] >= '0' && raw[i] <= '7';
               ++digits) {
            value = value * 8 + (raw[i++] - '0');
          }
          out.push_back(static_cast<char>(value));
        } else {
          out.push_back(e);
        }
    }
  }
  return out;
}

std::vector<FileDiff> parse_unified_diff(std::string_view patch) {
  std::vector<FileDiff> files;
  FileDiff* current = nullptr;
  DiffHunk* hunk = nullptr;
  bool saw_explicit_kind = false;
  std::string header_old, header_new;

  size_t pos = 0;
  while (pos < patch.size()) {
    std::string_view line = next_line(patch, pos);

    if (starts_with(line, "diff --git ")) {
      files.emplace_back();
      current = &files.back();
      hunk = nullptr;
      saw_explicit_kind = false;
      parse_diff_git_paths(line.substr(11), header_old, header_new);
      // Provisional paths; rename/---/+++ headers refine them below.
      current->old_path = header_old;
      current->new_path = header_new;
      continue;
    }
    if (current == nullptr) continue;

    if (starts_with(line, "new file mode")) {
      current->kind = ChangeKind::Added;
      current->old_path.reset();
      saw_explicit_kind = true;
      if (line.substr(14) == kGitlinkMode) current->submodule = true;
    } else if (starts_with(line, "deleted file mode")) {
      current->kind = ChangeKind::Deleted;
      current->new_path.reset();
      saw_explicit_kind = true;
      if (line.substr(18) == kGitlinkMode) current->submodule = true;
    } else if (starts_with(line, "rename from ")) {
      current->kind = ChangeKind::Renamed;
      current->old_path = unquote_git_path(line.substr(12));
      saw_explicit_kind = true;
    } else if (starts_with(line, "rename to ")) {
      current->new_path = unquote_git_path(line.substr(10));
    } else if (starts_with(line, "old mode") || starts_with(line, "new mode")) {
      if (line.substr(9) == kGitlinkMode) current->submodule = true;
    } else if (starts_with(line, "index ")) {
      size_t mode_at = line.rfind(' ');
      if (mode_at != std::string_view::npos &&
          line.substr(mode_at + 1) == kGitlinkMode) {
        current->submodule = true;
      }
    } else if (starts_with(line, "--- ")) {
      auto path = strip_prefix_path(line.substr(4));
      if (!path) {
        if (!saw_explicit_kind) current->kind = ChangeKind::Added;
        current->old_path.reset();
      } else if (current->kind != ChangeKind::Renamed) {
        current->old_path = *path;
      }
    } else if (starts_with(line, "+++ ")) {
      auto path = strip_prefix_path(line.substr(4));
      if (!path) {
        if (!saw_explicit_kind) current->kind = ChangeKind::Deleted;
        current->new_path.reset();
      } else if (current->kind != ChangeKind::Renamed) {
        current->new_path = *path;
      }
    } else if (starts_with(line, "Binary files") ||
               starts_with(line, "GIT binary patch")) {
      current->binary = true;
      current->hunks.clear();
      hunk = nullptr;
    } else if (starts_with(line, "@@ ")) {
      if (current->binary || current->submodule) continue;
      size_t close = line.find(" @@", 3);
      std::string_view ranges = line.substr(3, close == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : close - 3);
      size_t space = ranges.find(' ');
      if (space == std::string_view::npos) continue;
      DiffHunk h;
      parse_range(ranges.substr(0, space), h.old_start, h.old_count);
      parse_range(ranges.substr(space + 1), h.new_start, h.new_count);
      current->hunks.push_back(h);
      hunk = &current->hunks.back();
    } else if (hunk != nullptr && !line.empty() &&
               (line[0] == '+' || line[0] == '-')) {
      hunk->line_tags.push_back(line[0]);
    }
  }

  // Submodule pointer bumps carry hunk-like lines that are not file content.
  for (auto& fd : files) {
    if (fd.submodule) fd.hunks.clear();
  }
  return files;
}

std::vector<BlameLine> parse_blame_porcelain(std::string_view text) {
  std::vector<BlameLine> lines;
  std::unordered_map<std::string, std::int64_t> times;

  std::string current_sha;
  int current_final = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    std::string_view line = next_line(text, pos);
    if (!line.empty() && line[0] == '\t') {
      if (!current_sha.empty()) {
        auto it = times.find(current_sha);
        lines.push_back({current_final, current_sha,
                         it == times.end() ? 0 : it->second});
      }
      continue;
    }
    if (line.size() > 41 && is_commit_hash(line.substr(0, 40)) &&
        line[40] == ' ') {
      current_sha = std::string(line.substr(0, 40));
      // <sha> <orig_line> <final_line> [<group_size>]
      size_t first = line.find(' ', 41);
      if (first != std::string_view::npos) {
        size_t second = line.find(' ', first + 1);
        std::string_view final_field =
            line.substr(first + 1, second == std::string_view::npos
                                       ? std::string_view::npos
                                       : second - first - 1);
        current_final = to_int(final_field);
      }
      continue;
    }
    if (starts_with(line, "committer-time ")) {
      times[current_sha] = to_i64(line.substr(15));
    }
  }
  return lines;
}

}  // namespace wiaszz
