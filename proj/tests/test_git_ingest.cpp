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

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "doctest.h"
#include "support/fixture_repo.hpp"
#include "wiaszz/git_parse.hpp"

using namespace wiaszz;
using namespace wiaszz::testing;

TEST_CASE("commit id validation") {
  CHECK(is_commit_hash("8c5f991e6876de001ff11829ceb9894d11c80014"));
  CHECK_FALSE(is_commit_hash("8c5f991e6876de001ff11829ceb9894d11c8001"));
  CHECK_FALSE(is_commit_hash("8c5f991e6876de001ff11829ceb9894d11c80014a"));
  CHECK_FALSE(is_commit_hash("zz5f991e6876de001ff11829ceb9894d11c80014"));
  CHECK_THROWS_AS(CommitId("nope"), std::invalid_argument);
  CHECK(CommitId("8C5F991E6876DE001FF11829CEB9894D11C80014").str() ==
        "8c5f991e6876de001ff11829ceb9894d11c80014");
  CHECK_FALSE(CommitId::parse("xyz").has_value());
}

TEST_CASE("opening a non-repository fails") {
  auto dir = scratch_dir("not-a-repo");
  CHECK_THROWS_WITH_AS(Repository::open_local(dir),
                       doctest::Contains("not a repository"), GitError);
}

TEST_CASE("clone cache is idempotent and survives source removal") {
  auto source_dir = scratch_dir("clone-src");
  FixtureRepo source = FixtureRepo::init(source_dir);
  source.write("file.c", "int f(void) {\n  return 1;\n}\n");
  CommitId head = source.commit("initial", 1600000000);

  auto cache = scratch_dir("clone-cache");
  const std::string url = "file://" + source_dir.string();

  Repository first = Repository::open(url, cache);
  CHECK(first.head() == head);

  // Removing the origin proves the second open never refetches.
  std::filesystem::remove_all(source_dir);
  Repository second = Repository::open(url, cache);
  CHECK(second.head() == head);
  CHECK(second.root() == first.root());

  const std::string key = url_cache_key(url);
  CHECK(std::filesystem::exists(cache / key));
  CHECK(url_cache_key(url) == key);  // stable digest
}

TEST_CASE("local paths open in place without caching") {
  auto dir = scratch_dir("local-open");
  FixtureRepo fixture = FixtureRepo::init(dir);
  fixture.write("a.txt", "hello\n");
  CommitId head = fixture.commit("only", 1600000000);

  auto cache = scratch_dir("unused-cache");
  Repository repo = Repository::open(dir.string(), cache);
  CHECK(repo.head() == head);
  CHECK(std::filesystem::is_empty(cache));
}

TEST_CASE("history walk over the linear fixture") {
  auto fixture = make_linear_fixture(scratch_dir("abc-linear"));
  Repository repo = Repository::open_local(fixture.root);

  const CommitId& a = fixture.by_name.at("a");
  const std::int64_t oldest = fixture.time_by_name.at("g");

  SUBCASE("full walk is a..g newest first, start included") {
    auto walked = repo.walk_history(a, oldest, 100);
    REQUIRE(walked.size() == 7);
    const char* expected[] = {"a", "b", "c", "d", "e", "f", "g"};
    for (size_t i = 0; i < 7; ++i) {
      CHECK(walked[i].id == fixture.by_name.at(expected[i]));
      CHECK(walked[i].message == expected[i]);
    }
    // First-parent linkage along the walk.
    for (size_t i = 0; i + 1 < walked.size(); ++i) {
      REQUIRE_FALSE(walked[i].parents.empty());
      CHECK(walked[i].parents[0] == walked[i + 1].id);
    }
    CHECK(walked.back().is_root());
  }

  SUBCASE("time bound stops the walk") {
    auto walked = repo.walk_history(a, fixture.time_by_name.at("d"), 100);
    REQUIRE(walked.size() == 4);
    CHECK(walked.back().id == fixture.by_name.at("d"));
  }

  SUBCASE("max_commits bound") {
    auto walked = repo.walk_history(a, 0, 1);
    REQUIRE(walked.size() == 1);
    CHECK(walked[0].id == a);
  }

  SUBCASE("oldest_time after the start commit is a precondition error") {
    CHECK_THROWS_AS(
        repo.walk_history(a, fixture.time_by_name.at("a") + 10, 100),
        std::invalid_argument);
  }

  SUBCASE("unresolvable start") {
    CHECK_THROWS_AS(repo.resolve("0123456789012345678901234567890123456789"),
                    GitError);
  }

  SUBCASE("repeated reads are identical") {
    auto once = repo.walk_history(a, oldest, 100);
    auto twice = repo.walk_history(a, oldest, 100);
    REQUIRE(once.size() == twice.size());
    for (size_t i = 0; i < once.size(); ++i) {
      CHECK(once[i].id == twice[i].id);
      CHECK(once[i].commit_time == twice[i].commit_time);
    }
  }
}

TEST_CASE("diff of a root commit is against the empty tree") {
  auto dir = scratch_dir("root-diff");
  FixtureRepo fixture = FixtureRepo::init(dir);
  std::string content;
  for (int i = 1; i <= 10; ++i) content += fmt::format("line {}\n", i);
  fixture.write("ten.txt", content);
  CommitId root = fixture.commit("root", 1600000000);

  Repository repo = Repository::open_local(dir);
  auto diffs = repo.diff_commit(root);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].kind == ChangeKind::Added);
  CHECK_FALSE(diffs[0].old_path.has_value());
  CHECK(diffs[0].new_path == "ten.txt");
  REQUIRE(diffs[0].hunks.size() == 1);
  CHECK(diffs[0].hunks[0].old_count == 0);
  CHECK(diffs[0].hunks[0].new_start == 1);
  CHECK(diffs[0].hunks[0].new_count == 10);
}

TEST_CASE("rename with a one-line edit is detected") {
  auto dir = scratch_dir("rename-diff");
  FixtureRepo fixture = FixtureRepo::init(dir);
  std::string body = "int x(void) {\n  return 1;\n}\nint tail;\n";
  fixture.write("x.c", body + "int filler_a;\nint filler_b;\n");
  fixture.commit("create", 1600000000);

  fixture.move("x.c", "y.c");
  fixture.edit("y.c", "return 1;", "return 2;");
  CommitId renamed = fixture.commit("rename", 1600000600);

  Repository repo = Repository::open_local(dir);
  auto diffs = repo.diff_commit(renamed);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].kind == ChangeKind::Renamed);
  CHECK(diffs[0].old_path == "x.c");
  CHECK(diffs[0].new_path == "y.c");
  REQUIRE(diffs[0].hunks.size() == 1);
  CHECK(diffs[0].hunks[0].old_count == 1);
  CHECK(diffs[0].hunks[0].new_count == 1);
}

TEST_CASE("merge commits diff against the first parent only") {
  auto dir = scratch_dir("merge-diff");
  FixtureRepo fixture = FixtureRepo::init(dir);
  fixture.write("main.txt", "base\n");
  fixture.commit("base", 1600000000);

  fixture.branch("side");
  fixture.write("main.txt", "base\nmainline\n");
  fixture.commit("mainline", 1600000600);

  fixture.checkout("side");
  fixture.write("side.txt", "from the side branch\n");
  fixture.commit("side work", 1600001200);

  fixture.checkout("main");
  CommitId merge = fixture.merge("side", "merge side", 1600001800);

  Repository repo = Repository::open_local(dir);
  const CommitMeta& meta = repo.commit_meta(merge);
  REQUIRE(meta.is_merge());

  // Relative to the first parent, only the side branch's file appears.
  auto diffs = repo.diff_commit(merge);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].new_path == "side.txt");
  CHECK(diffs[0].kind == ChangeKind::Added);
}

TEST_CASE("binary files yield empty hunks") {
  auto dir = scratch_dir("binary-diff");
  FixtureRepo fixture = FixtureRepo::init(dir);
  std::string blob = "BIN";
  blob.push_back('\0');
  blob += "with\0nulls";
  fixture.write("img.bin", blob);
  CommitId commit = fixture.commit("binary", 1600000000);

  Repository repo = Repository::open_local(dir);
  auto diffs = repo.diff_commit(commit);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].binary);
  CHECK(diffs[0].hunks.empty());
}

TEST_CASE("blame over a single-author file") {
  auto dir = scratch_dir("blame-single");
  FixtureRepo fixture = FixtureRepo::init(dir);
  fixture.write("solo.txt", "one\ntwo\nthree\nfour\n");
  CommitId only = fixture.commit("solo", 1600000000);

  Repository repo = Repository::open_local(dir);
  auto blamed = repo.blame_lines(only, "solo.txt", {1, 2, 4});
  REQUIRE(blamed.size() == 3);
  for (const BlameAttribution& attr : blamed) {
    CHECK(attr.origin == only);
  }
}

TEST_CASE("blame separates line origins like the overview example") {
  // Oldest commit g creates the file; f then edits line 16 and c line 15.
  // Blamed at the fix commit's parent, lines 15/16/20 resolve to c/f/g.
  auto dir = scratch_dir("blame-overview");
  FixtureRepo fixture = FixtureRepo::init(dir);
  std::string content;
  for (int i = 1; i <= 25; ++i) content += fmt::format("line {} body;\n", i);
  fixture.write("code.c", content);
  CommitId g = fixture.commit("g", 1600000000);

  fixture.edit("code.c", "line 16 body;", "line 16 patched;");
  CommitId f = fixture.commit("f", 1600000600);

  fixture.edit("code.c", "line 15 body;", "line 15 patched;");
  CommitId c = fixture.commit("c", 1600001200);

  fixture.edit("code.c", "line 15 patched;", "line 15 fixed;");
  fixture.edit("code.c", "line 16 patched;", "line 16 fixed;");
  fixture.edit("code.c", "line 20 body;", "line 20 fixed;");
  CommitId fc = fixture.commit("fc", 1600001800);

  Repository repo = Repository::open_local(dir);
  const CommitId& parent = repo.commit_meta(fc).parents[0];
  auto blamed = repo.blame_lines(parent, "code.c", {15, 16, 20});
  REQUIRE(blamed.size() == 3);

  auto origin_of = [&](int line) {
    for (const BlameAttribution& attr : blamed) {
      if (attr.line == line) return attr.origin;
    }
    FAIL("line not blamed");
    return CommitId();
  };
  CHECK(origin_of(15) == c);
  CHECK(origin_of(16) == f);
  CHECK(origin_of(20) == g);

  // Blame origins are ancestors of the blamed revision.
  for (const BlameAttribution& attr : blamed) {
    CHECK(repo.is_ancestor(attr.origin, parent));
  }
}

TEST_CASE("blame rejects lines past the end of the file") {
  auto dir = scratch_dir("blame-range");
  FixtureRepo fixture = FixtureRepo::init(dir);
  fixture.write("short.txt", "only\ntwo lines\n");
  CommitId commit = fixture.commit("short", 1600000000);

  Repository repo = Repository::open_local(dir);
  CHECK_THROWS_WITH_AS(repo.blame_lines(commit, "short.txt", {5}),
                       doctest::Contains("out of range"), GitError);
  CHECK_THROWS_WITH_AS(repo.blame_lines(commit, "missing.txt", {1}),
                       doctest::Contains("missing file"), GitError);
}

TEST_CASE("unified diff parser handles crafted patches") {
  SUBCASE("quoted paths") {
    CHECK(unquote_git_path("\"a/with\\ttab.c\"") == "a/with\ttab.c");
    CHECK(unquote_git_path("plain.c") == "plain.c");
    CHECK(unquote_git_path("\"oct\\303\\251.c\"") == "oct\303\251.c");
  }

  SUBCASE("submodule bumps carry no content hunks") {
    const char* patch =
        "diff --git a/libs/dep b/libs/dep\n"
        "index 1111111..2222222 160000\n"
        "--- a/libs/dep\n"
        "+++ b/libs/dep\n"
        "@@ -1 +1 @@\n"
        "-Subproject commit 1111111111111111111111111111111111111111\n"
        "+Subproject commit 2222222222222222222222222222222222222222\n";
    auto files = parse_unified_diff(patch);
    REQUIRE(files.size() == 1);
    CHECK(files[0].submodule);
    CHECK(files[0].hunks.empty());
  }

  SUBCASE("pure rename without hunks") {
    const char* patch =
        "diff --git a/old name.c b/new name.c\n"
        "similarity index 100%\n"
        "rename from old name.c\n"
        "rename to new name.c\n";
    auto files = parse_unified_diff(patch);
    REQUIRE(files.size() == 1);
    CHECK(files[0].kind == ChangeKind::Renamed);
    CHECK(files[0].old_path == "old name.c");
    CHECK(files[0].new_path == "new name.c");
    CHECK(files[0].hunks.empty());
  }

  SUBCASE("line tags preserve patch order") {
    const char* patch =
        "diff --git a/f.c b/f.c\n"
        "index 1111111..2222222 100644\n"
        "--- a/f.c\n"
        "+++ b/f.c\n"
        "@@ -3,2 +3,3 @@ int ctx\n"
        "-gone one\n"
        "-gone two\n"
        "+new one\n"
        "+new two\n"
        "+new three\n";
    auto files = parse_unified_diff(patch);
    REQUIRE(files.size() == 1);
    REQUIRE(files[0].hunks.size() == 1);
    const DiffHunk& hunk = files[0].hunks[0];
    CHECK(hunk.old_start == 3);
    CHECK(hunk.old_count == 2);
    CHECK(hunk.new_start == 3);
    CHECK(hunk.new_count == 3);
    CHECK(hunk.line_tags == "--+++");
  }
}
