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

#include "wiaszz/repository.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>

#include <fmt/format.h>

#include "wiaszz/git_parse.hpp"
#include "subprocess.hpp"

namespace wiaszz {

namespace {

constexpr char kFieldSep = '\x1f';
const std::string kLogFormat = "%H\x1f%P\x1f%at\x1f%ct\x1f%B";

std::int64_t parse_i64(std::string_view s) {
  std::int64_t value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

CommitMeta parse_log_record(std::string_view record) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    size_t sep = record.find(kFieldSep, start);
    if (sep == std::string_view::npos) {
      throw GitError(fmt::format("malformed log record: \"{}\"",
                                 record.substr(0, 80)));
    }
    fields.push_back(record.substr(start, sep - start));
    start = sep + 1;
  }
  fields.push_back(record.substr(start));  // message, may contain anything

  CommitMeta meta;
  meta.id = CommitId(fields[0]);
  std::string_view parents = fields[1];
  while (!parents.empty()) {
    size_t sp = parents.find(' ');
    std::string_view one = parents.substr(0, sp);
    if (!one.empty()) meta.parents.emplace_back(one);
    if (sp == std::string_view::npos) break;
    parents.remove_prefix(sp + 1);
  }
  meta.author_time = parse_i64(fields[2]);
  meta.commit_time = parse_i64(fields[3]);
  meta.message = std::string(fields[4]);
  while (!meta.message.empty() && meta.message.back() == '\n') {
    meta.message.pop_back();
  }
  return meta;
}

// Serializes the initial clone of one URL across threads and processes.
class CloneLock {
 public:
  explicit CloneLock(const std::filesystem::path& lock_path) {
    fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~CloneLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  CloneLock(const CloneLock&) = delete;
  CloneLock& operator=(const CloneLock&) = delete;

 private:
  int fd_ = -1;
};

std::mutex& clone_mutex() {
  static std::mutex m;
  return m;
}

bool is_valid_clone(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) return false;
  auto res = detail::run_process({"git", "rev-parse", "--git-dir"}, dir);
  return res.ok();
}

}  // namespace

std::string url_cache_key(std::string_view url) {
  // FNV-1a, 64-bit: stable across runs and platforms.
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : url) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", hash);
}

bool looks_like_remote_url(std::string_view source) {
  if (source.find("://") != std::string_view::npos) return true;
  // scp-like user@host:path
  size_t at = source.find('@');
  size_t colon = source.find(':');
  return at != std::string_view::npos && colon != std::string_view::npos &&
         at < colon && !std::filesystem::exists(source);
}

Repository Repository::open_local(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw GitError(fmt::format("not a repository: {}", root.string()));
  }
  auto res = detail::run_process({"git", "rev-parse", "--show-toplevel"}, root);
  if (!res.ok()) {
    throw GitError(fmt::format("not a repository: {}", root.string()));
  }
  std::string top = res.out;
  while (!top.empty() && (top.back() == '\n' || top.back() == '\r')) {
    top.pop_back();
  }
  return Repository(std::filesystem::path(top));
}

Repository Repository::open(const std::string& source,
                            const std::filesystem::path& cache_dir) {
  if (!looks_like_remote_url(source)) {
    return open_local(source);
  }

  std::filesystem::create_directories(cache_dir);
  const std::string key = url_cache_key(source);
  const auto clone_dir = cache_dir / key;

  std::lock_guard<std::mutex> in_process(clone_mutex());
  CloneLock lock(cache_dir / (key + ".lock"));

  if (is_valid_clone(clone_dir)) {
    return Repository(clone_dir);
  }
  std::filesystem::remove_all(clone_dir);

  const auto tmp_dir = cache_dir / (key + ".tmp");
  std::filesystem::remove_all(tmp_dir);
  auto res = detail::run_process(
      {"git", "clone", "--quiet", source, tmp_dir.string()}, cache_dir,
      {{"GIT_TERMINAL_PROMPT", "0"}});
  if (!res.ok()) {
    std::filesystem::remove_all(tmp_dir);
    throw GitError(fmt::format("clone of {} failed: {}", source, res.err));
  }
  std::filesystem::rename(tmp_dir, clone_dir);
  std::ofstream(cache_dir / (key + ".url")) << source << "\n";
  return Repository(clone_dir);
}

Repository::Output Repository::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv = {"git", "-c", "core.quotePath=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  auto res = detail::run_process(argv, root_, {{"GIT_TERMINAL_PROMPT", "0"},
                                               {"LC_ALL", "C"}});
  return Output{res.exit_code, std::move(res.out), std::move(res.err)};
}

Repository::Output Repository::git_checked(
    const std::vector<std::string>& args, std::string_view action) const {
  Output res = git(args);
  if (res.exit_code != 0) {
    throw GitError(fmt::format("{}: {}", action, res.err));
  }
  return res;
}

CommitId Repository::head() const {
  auto res = git({"rev-parse", "--verify", "HEAD"});
  if (res.exit_code != 0) {
    throw GitError(fmt::format("cannot resolve HEAD in {}: {}",
                               root_.string(), res.err));
  }
  std::string sha = res.out.substr(0, 40);
  return CommitId(sha);
}

CommitId Repository::resolve(const std::string& refish) const {
  auto res = git({"rev-parse", "--verify", "--quiet", refish + "^{commit}"});
  if (res.exit_code != 0 || res.out.size() < 40) {
    throw GitError(fmt::format("unresolvable commit: {}", refish));
  }
  return CommitId(std::string_view(res.out).substr(0, 40));
}

const CommitMeta& Repository::commit_meta(const CommitId& id) const {
  auto it = meta_cache_.find(id.str());
  if (it != meta_cache_.end()) return it->second;

  auto res = git_checked({"log", "-1", "-z", "--format=" + kLogFormat,
                          id.str(), "--"},
                         fmt::format("unresolvable commit: {}", id.str()));
  std::string_view record(res.out);
  if (size_t nul = record.find('\0'); nul != std::string_view::npos) {
    record = record.substr(0, nul);
  }
  CommitMeta meta = parse_log_record(record);
  return meta_cache_.emplace(id.str(), std::move(meta)).first->second;
}

std::vector<CommitMeta> Repository::walk_history(const CommitId& start,
                                                 std::int64_t oldest_time,
                                                 int max_commits) const {
  if (max_commits <= 0) {
    throw std::invalid_argument("walk_history: max_commits must be positive");
  }
  const CommitMeta& start_meta = commit_meta(start);
  if (start_meta.commit_time < oldest_time) {
    throw std::invalid_argument(
        "walk_history: oldest_time is after the start commit's commit time");
  }

  auto res = git_checked(
      {"log", "-z", "--first-parent",
       fmt::format("--max-count={}", max_commits),
       "--format=" + kLogFormat, start.str(), "--"},
      fmt::format("history walk from {}", start.str()));

  std::vector<CommitMeta> out;
  std::string_view rest(res.out);
  while (!rest.empty()) {
    size_t nul = rest.find('\0');
    std::string_view record = rest.substr(0, nul);
    rest = nul == std::string_view::npos ? std::string_view{}
                                         : rest.substr(nul + 1);
    if (record.empty()) continue;
    CommitMeta meta = parse_log_record(record);
    if (meta.commit_time < oldest_time) break;
    meta_cache_.emplace(meta.id.str(), meta);
    out.push_back(std::move(meta));
  }
  return out;
}

const std::string& Repository::empty_tree() const {
  if (empty_tree_.empty()) {
    auto res = git_checked({"hash-object", "-t", "tree", "/dev/null"},
                           "hash empty tree");
    empty_tree_ = res.out.substr(0, res.out.find('\n'));
  }
  return empty_tree_;
}

std::vector<FileDiff> Repository::diff_commit(const CommitId& commit) const {
  const CommitMeta& meta = commit_meta(commit);
  // Merge commits and everything else diff against the first parent.
  std::string base = meta.is_root() ? empty_tree() : meta.parents[0].str();
  auto res = git_checked({"diff", "--no-color", "--no-ext-diff",
                          "--unified=0", "-M", base, commit.str(), "--"},
                         fmt::format("diff of {}", commit.str()));
  return parse_unified_diff(res.out);
}

namespace {

std::vector<std::pair<int, int>> coalesce_lines(std::vector<int> lines) {
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::vector<std::pair<int, int>> ranges;
  for (int line : lines) {
    if (!ranges.empty() && ranges.back().second + 1 == line) {
      ranges.back().second = line;
    } else {
      ranges.emplace_back(line, line);
    }
  }
  return ranges;
}

}  // namespace

Repository::BlameResult Repository::blame_with_times(
    const CommitId& at, const std::string& file,
    const std::vector<int>& lines) const {
  BlameResult result;
  if (lines.empty()) return result;
  for (int line : lines) {
    if (line < 1) {
      throw GitError(fmt::format("line out of range: {}:{}", file, line));
    }
  }

  std::vector<std::string> args = {"blame", "--porcelain"};
  for (auto [lo, hi] : coalesce_lines(lines)) {
    args.push_back("-L");
    args.push_back(fmt::format("{},{}", lo, hi));
  }
  args.push_back(at.str());
  args.push_back("--");
  args.push_back(file);

  Output res = git(args);
  if (res.exit_code != 0) {
    if (res.err.find("has only") != std::string::npos) {
      throw GitError(fmt::format("line out of range in {} at {}: {}", file,
                                 at.str(), res.err));
    }
    if (res.err.find("no such path") != std::string::npos ||
        res.err.find("does not exist") != std::string::npos) {
      throw GitError(fmt::format("missing file {} at {}: {}", file, at.str(),
                                 res.err));
    }
    throw GitError(fmt::format("blame of {} at {}: {}", file, at.str(),
                               res.err));
  }

  for (const BlameLine& bl : parse_blame_porcelain(res.out)) {
    result.lines.push_back({file, bl.final_line, CommitId(bl.origin)});
    result.origin_times.emplace(bl.origin, bl.committer_time);
  }
  return result;
}

std::vector<BlameAttribution> Repository::blame_lines(
    const CommitId& at, const std::string& file,
    const std::vector<int>& lines) const {
  return blame_with_times(at, file, lines).lines;
}

std::string Repository::file_at(const CommitId& commit,
                                const std::string& path) const {
  auto res = git({"show", commit.str() + ":" + path});
  if (res.exit_code != 0) {
    throw GitError(fmt::format("missing file {} at {}: {}", path,
                               commit.str(), res.err));
  }
  return std::move(res.out);
}

bool Repository::is_ancestor(const CommitId& ancestor,
                             const CommitId& descendant) const {
  auto res = git({"merge-base", "--is-ancestor", ancestor.str(),
                  descendant.str()});
  if (res.exit_code == 0) return true;
  if (res.exit_code == 1) return false;
  throw GitError(fmt::format("merge-base failed: {}", res.err));
}

}  // namespace wiaszz
