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

#include "fixture_repo.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "../../core/src/subprocess.hpp"

namespace wiaszz::testing {

namespace {

std::vector<std::pair<std::string, std::string>> git_env(std::int64_t time) {
  std::vector<std::pair<std::string, std::string>> env = {
      {"GIT_AUTHOR_NAME", "Fixture"},
      {"GIT_AUTHOR_EMAIL", "fixture@example.com"},
      {"GIT_COMMITTER_NAME", "Fixture"},
      {"GIT_COMMITTER_EMAIL", "fixture@example.com"},
      {"GIT_CONFIG_GLOBAL", "/dev/null"},
      {"GIT_CONFIG_SYSTEM", "/dev/null"},
  };
  if (time > 0) {
    env.push_back({"GIT_AUTHOR_DATE", fmt::format("{} +0000", time)});
    env.push_back({"GIT_COMMITTER_DATE", fmt::format("{} +0000", time)});
  }
  return env;
}

}  // namespace

std::string FixtureRepo::git(const std::vector<std::string>& args,
                             std::int64_t time) const {
  std::vector<std::string> argv = {"git"};
  argv.insert(argv.end(), args.begin(), args.end());
  auto result = detail::run_process(argv, root_, git_env(time));
  if (result.exit_code != 0) {
    throw std::runtime_error(fmt::format("fixture git {} failed: {}",
                                         args.front(), result.err));
  }
  return result.out;
}

FixtureRepo FixtureRepo::init(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  FixtureRepo repo(dir);
  repo.git({"init", "-q", "-b", "main"});
  repo.git({"config", "commit.gpgsign", "false"});
  return repo;
}

void FixtureRepo::write(const std::string& rel_path,
                        const std::string& content) {
  auto full = root_ / rel_path;
  std::filesystem::create_directories(full.parent_path());
  std::ofstream out(full, std::ios::binary);
  out << content;
}

void FixtureRepo::append(const std::string& rel_path,
                         const std::string& content) {
  std::ofstream out(root_ / rel_path, std::ios::binary | std::ios::app);
  out << content;
}

void FixtureRepo::remove(const std::string& rel_path) {
  std::filesystem::remove(root_ / rel_path);
}

void FixtureRepo::move(const std::string& from, const std::string& to) {
  auto dest = root_ / to;
  std::filesystem::create_directories(dest.parent_path());
  std::filesystem::rename(root_ / from, dest);
}

void FixtureRepo::edit(const std::string& rel_path, const std::string& needle,
                       const std::string& replacement) {
  auto full = root_ / rel_path;
  std::ifstream in(full, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  size_t at = text.find(needle);
  if (at == std::string::npos) {
    throw std::runtime_error(
        fmt::format("fixture edit: \"{}\" not found in {}", needle, rel_path));
  }
  text.replace(at, needle.size(), replacement);
  std::ofstream out(full, std::ios::binary);
  out << text;
}

void FixtureRepo::insert_after(const std::string& rel_path,
                               const std::string& anchor,
                               const std::string& lines) {
  auto full = root_ / rel_path;
  std::ifstream in(full, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  size_t at = text.find(anchor);
  if (at == std::string::npos) {
    throw std::runtime_error(fmt::format(
        "fixture insert_after: \"{}\" not found in {}", anchor, rel_path));
  }
  size_t eol = text.find('\n', at);
  if (eol == std::string::npos) eol = text.size();
  else ++eol;
  text.insert(eol, lines);
  std::ofstream out(full, std::ios::binary);
  out << text;
}

CommitId FixtureRepo::commit(const std::string& message, std::int64_t time) {
  git({"add", "-A"});
  git({"commit", "-q", "--allow-empty", "-m", message}, time);
  std::string sha = git({"rev-parse", "HEAD"});
  return CommitId(sha.substr(0, 40));
}

void FixtureRepo::branch(const std::string& name) {
  git({"branch", name});
}

void FixtureRepo::checkout(const std::string& ref) {
  git({"checkout", "-q", ref});
}

CommitId FixtureRepo::merge(const std::string& branch,
                            const std::string& message, std::int64_t time) {
  git({"merge", "-q", "--no-ff", "--no-edit", "-m", message, branch}, time);
  std::string sha = git({"rev-parse", "HEAD"});
  return CommitId(sha.substr(0, 40));
}

CommitId FixtureRepo::commit_by_message(const std::string& message) const {
  std::string sha = git({"log", "--all", "--format=%H",
                         fmt::format("--grep=^{}$", message)});
  if (sha.size() < 40) {
    throw std::runtime_error(
        fmt::format("fixture: no commit with message \"{}\"", message));
  }
  return CommitId(sha.substr(0, 40));
}

std::filesystem::path scratch_dir(const std::string& label) {
  static std::atomic<int> counter{0};
  auto base = std::filesystem::temp_directory_path() /
              fmt::format("wiaszz-tests-{}", ::getpid());
  auto dir = base / fmt::format("{}-{}", label, counter.fetch_add(1));
  std::filesystem::create_directories(dir);
  return dir;
}

namespace {

constexpr const char* kCoreC = R"(#include "core.h"

int mx(int a) {
  int r = a + 1;
  return r;
}

int my(int a, int b) {
  int r = a * b;
  return r;
}

int mz(int a) {
  int r = a - 1;
  return r;
}
)";

}  // namespace

LinearFixture make_linear_fixture(const std::filesystem::path& dir,
                                  std::int64_t base, std::int64_t step) {
  LinearFixture fixture;
  fixture.root = dir;
  FixtureRepo repo = FixtureRepo::init(dir);

  auto record = [&](const std::string& name, std::int64_t time) {
    fixture.by_name[name] = repo.commit(name, time);
    fixture.time_by_name[name] = time;
  };

  std::int64_t t = base;

  // g: creates the file with all three functions.
  repo.write("src/core.c", kCoreC);
  record("g", t);

  // f: edits one line inside each of mx, my, mz.
  repo.edit("src/core.c", "int r = a + 1;", "int r = a + 2;");
  repo.edit("src/core.c", "int r = a * b;", "int r = a * b + 1;");
  repo.edit("src/core.c", "int r = a - 1;", "int r = a - 2;");
  record("f", t += step);

  // e: touches only an unrelated file.
  repo.write("src/other.c", "int helper(int v) {\n  return v;\n}\n");
  record("e", t += step);

  // d: edits my and mz.
  repo.edit("src/core.c", "int r = a * b + 1;", "int r = a * b + 2;");
  repo.edit("src/core.c", "int r = a - 2;", "int r = a - 3;");
  record("d", t += step);

  // c: edits only my.
  repo.edit("src/core.c", "int r = a * b + 2;", "int r = a * b + 3;");
  record("c", t += step);

  // b: edits mx, my, mz and an extra function in another file.
  repo.edit("src/core.c", "int r = a + 2;", "int r = a + 3;");
  repo.edit("src/core.c", "int r = a * b + 3;", "int r = a * b + 4;");
  repo.edit("src/core.c", "int r = a - 3;", "int r = a - 4;");
  repo.edit("src/other.c", "return v;", "return v + 1;");
  record("b", t += step);

  // a: the fix commit, edits mx, my, mz.
  repo.edit("src/core.c", "int r = a + 3;", "int r = a + 4;");
  repo.edit("src/core.c", "int r = a * b + 4;", "int r = a * b + 5;");
  repo.edit("src/core.c", "int r = a - 4;", "int r = a - 5;");
  record("a", t += step);

  return fixture;
}

}  // namespace wiaszz::testing
