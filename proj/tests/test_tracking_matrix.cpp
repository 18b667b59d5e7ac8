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

#include <random>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace wiaszz;
using namespace wiaszz::testing;

namespace {

MethodRef method(const std::string& name) {
  return {"src/core.c", name, 1};
}

// 'g' is not a hex digit; encode it as '0' and decode when asserting.
CommitId id_of(char letter) {
  return CommitId(std::string(40, letter == 'g' ? '0' : letter));
}

char letter_of(const CommitId& id) {
  char c = id.str()[0];
  return c == '0' ? 'g' : c;
}

// The seven-commit worked example: rows a..g over columns mx,my,mz.
struct WorkedExample {
  MethodChangeSet fc;
  std::vector<MethodChangeSet> history;
};

WorkedExample worked_example() {
  WorkedExample ex;
  auto all = {method("mx"), method("my"), method("mz")};

  ex.fc.commit = id_of('a');
  ex.fc.commit_time = 7000;
  ex.fc.methods = {all.begin(), all.end()};

  auto entry = [](char letter, std::int64_t time,
                  std::set<MethodRef> methods) {
    MethodChangeSet cs;
    cs.commit = id_of(letter);
    cs.commit_time = time;
    cs.methods = std::move(methods);
    return cs;
  };
  ex.history.push_back(entry('a', 7000, {all.begin(), all.end()}));
  ex.history.push_back(entry('b', 6000,
                             {method("mx"), method("my"), method("mz"),
                              method("extra")}));
  ex.history.push_back(entry('c', 5000, {method("my")}));
  ex.history.push_back(entry('d', 4000, {method("my"), method("mz")}));
  ex.history.push_back(entry('e', 3000, {method("unrelated")}));
  ex.history.push_back(entry('f', 2000, {all.begin(), all.end()}));
  ex.history.push_back(entry('g', 1000, {all.begin(), all.end()}));
  return ex;
}

std::set<char> item_letters(const WorkItemSet& items) {
  std::set<char> letters;
  for (const WorkItem& item : items.items) {
    letters.insert(letter_of(item.commit));
  }
  return letters;
}

}  // namespace

TEST_CASE("factor parses decimals exactly") {
  CHECK(Factor::parse("0.7").num() == 7);
  CHECK(Factor::parse("0.7").den() == 10);
  CHECK(Factor::parse("0.5").value() == doctest::Approx(0.5));
  CHECK(Factor::parse("1").num() == 1);
  CHECK(Factor::parse("1").den() == 1);
  CHECK(Factor::parse("0.25").str() == "0.25");
  CHECK(Factor::parse("0.7").str() == "0.7");
  CHECK_THROWS_AS(Factor::parse("0"), std::invalid_argument);
  CHECK_THROWS_AS(Factor::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Factor::parse("abc"), std::invalid_argument);
  CHECK(Factor::from_double(0.7) == Factor(7, 10));
}

TEST_CASE("worked example matrix rows match the published layout") {
  WorkedExample ex = worked_example();
  TrackingMatrix matrix = build_tracking_matrix(ex.fc, ex.history);

  REQUIRE(matrix.columns.size() == 3);
  REQUIRE(matrix.rows.size() == 7);

  auto row_bits = [&](char letter) {
    for (const MatrixRow& row : matrix.rows) {
      if (letter_of(row.commit) == letter) return row.bits;
    }
    FAIL("row not found");
    return std::vector<std::uint8_t>{};
  };
  CHECK(row_bits('a') == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(row_bits('b') == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(row_bits('c') == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(row_bits('d') == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(row_bits('e') == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(row_bits('f') == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(row_bits('g') == std::vector<std::uint8_t>{1, 1, 1});

  // Rows are newest first.
  for (size_t i = 1; i < matrix.rows.size(); ++i) {
    CHECK(matrix.rows[i - 1].commit_time >= matrix.rows[i].commit_time);
  }

  // The extra method touched by b is not a column.
  for (const MethodRef& column : matrix.columns) {
    CHECK(column.qualified_name != "extra");
  }
}

TEST_CASE("threshold boundary at the published factors") {
  WorkedExample ex = worked_example();
  TrackingMatrix matrix = build_tracking_matrix(ex.fc, ex.history);

  size_t row_d = 0;
  for (size_t i = 0; i < matrix.rows.size(); ++i) {
    if (letter_of(matrix.rows[i].commit) == 'd') row_d = i;
  }
  // d touches 2 of 3 methods: 2 >= 1.5 but 2 < 2.1.
  CHECK(is_work_item(matrix, row_d, Factor::parse("0.5")));
  CHECK_FALSE(is_work_item(matrix, row_d, Factor::parse("0.7")));

  CHECK(item_letters(detect_work_items(matrix, Factor::parse("0.5"))) ==
        std::set<char>{'a', 'b', 'd', 'f', 'g'});
  CHECK(item_letters(detect_work_items(matrix, Factor::parse("0.7"))) ==
        std::set<char>{'a', 'b', 'f', 'g'});

  CHECK_THROWS_AS(is_work_item(matrix, 99, Factor::parse("0.5")),
                  std::out_of_range);
}

TEST_CASE("empty inputs") {
  WorkedExample ex = worked_example();
  MethodChangeSet empty_fc;
  empty_fc.commit = id_of('a');
  CHECK_THROWS_AS(build_tracking_matrix(empty_fc, ex.history),
                  EmptyChangeSetError);

  TrackingMatrix no_rows = build_tracking_matrix(ex.fc, {});
  CHECK(no_rows.rows.empty());
  CHECK(no_rows.columns.size() == 3);
  CHECK(detect_work_items(no_rows, Factor::parse("0.5")).items.empty());
}

TEST_CASE("merge entries produce no rows") {
  WorkedExample ex = worked_example();
  MethodChangeSet merge;
  merge.commit = id_of('9');
  merge.commit_time = 6500;
  merge.is_merge = true;
  ex.history.insert(ex.history.begin() + 1, merge);

  TrackingMatrix matrix = build_tracking_matrix(ex.fc, ex.history);
  CHECK(matrix.rows.size() == 7);
  for (const MatrixRow& row : matrix.rows) {
    CHECK(row.commit != merge.commit);
  }
}

TEST_CASE("matrix equals naive recomputation on random histories") {
  std::mt19937 rng(20260809);
  for (int trial = 0; trial < 300; ++trial) {
    RandomHistory random = random_history(rng);
    TrackingMatrix matrix =
        build_tracking_matrix(random.fc_changes, random.history);

    size_t expected_rows = 0;
    for (const MethodChangeSet& entry : random.history) {
      if (!entry.is_merge) ++expected_rows;
    }
    REQUIRE(matrix.rows.size() == expected_rows);

    for (const MatrixRow& row : matrix.rows) {
      const MethodChangeSet* source = nullptr;
      for (const MethodChangeSet& entry : random.history) {
        if (entry.commit == row.commit) source = &entry;
      }
      REQUIRE(source != nullptr);
      int naive = naive_overlap(random.fc_changes.methods, source->methods);
      CHECK(naive == row.row_sum);
      for (size_t j = 0; j < matrix.columns.size(); ++j) {
        bool member = source->methods.count(matrix.columns[j]) > 0;
        CHECK(member == (row.bits[j] == 1));
      }
    }
  }
}

TEST_CASE("factor one keeps exactly the all-ones rows") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    RandomHistory random = random_history(rng);
    TrackingMatrix matrix =
        build_tracking_matrix(random.fc_changes, random.history);
    WorkItemSet items = detect_work_items(matrix, Factor::parse("1.0"));
    size_t all_ones = 0;
    for (const MatrixRow& row : matrix.rows) {
      if (row.row_sum == static_cast<int>(matrix.columns.size())) ++all_ones;
    }
    CHECK(items.items.size() == all_ones);
  }
}

TEST_CASE("work item sets shrink as the factor grows") {
  std::mt19937 rng(99);
  const Factor factors[] = {Factor::parse("0.1"), Factor::parse("0.3"),
                            Factor::parse("0.5"), Factor::parse("0.7"),
                            Factor::parse("0.9"), Factor::parse("1.0")};
  for (int trial = 0; trial < 200; ++trial) {
    RandomHistory random = random_history(rng);
    TrackingMatrix matrix =
        build_tracking_matrix(random.fc_changes, random.history);
    for (size_t i = 1; i < std::size(factors); ++i) {
      auto lesser = item_letters(detect_work_items(matrix, factors[i - 1]));
      auto greater = item_letters(detect_work_items(matrix, factors[i]));
      for (char c : greater) {
        CHECK(lesser.count(c) == 1);
      }
    }
  }
}

TEST_CASE("candidate selection inside the window") {
  WorkedExample ex = worked_example();
  TrackingMatrix matrix = build_tracking_matrix(ex.fc, ex.history);
  WorkItemSet items = detect_work_items(matrix, Factor::parse("0.7"));

  // Issue date between f (2000) and d (4000): only f and g qualify.
  auto picked = select_bic_candidate(items, 2500, 30);
  REQUIRE(picked.has_value());
  CHECK(letter_of(*picked) == 'f');

  SUBCASE("all items newer than the issue date") {
    CHECK_FALSE(select_bic_candidate(items, 500, 30).has_value());
  }
  SUBCASE("window excludes old items") {
    // One-day lookback from 2500 reaches back past zero: everything fits.
    CHECK(select_bic_candidate(items, 2500, 1).has_value());
    // A one-day window anchored far in the future admits nothing.
    CHECK_FALSE(select_bic_candidate(items, 90000000, 1).has_value());
  }
}

TEST_CASE("equal timestamps break toward the smaller commit id") {
  WorkItemSet items;
  items.fc = id_of('a');
  items.factor = Factor::parse("0.7");
  items.items.push_back({CommitId(std::string(40, 'e')), 1000});
  items.items.push_back({CommitId(std::string(40, 'b')), 1000});
  items.items.push_back({CommitId(std::string(40, 'c')), 900});

  auto picked = select_bic_candidate(items, 2000, 30);
  REQUIRE(picked.has_value());
  CHECK(picked->str() == std::string(40, 'b'));

  // Deterministic across repeated evaluation.
  for (int i = 0; i < 10; ++i) {
    CHECK(select_bic_candidate(items, 2000, 30) == picked);
  }
}

TEST_CASE("selected candidate always predates the issue date") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<std::int64_t> date(1999990000, 2000000500);
  for (int trial = 0; trial < 300; ++trial) {
    RandomHistory random = random_history(rng);
    TrackingMatrix matrix =
        build_tracking_matrix(random.fc_changes, random.history);
    WorkItemSet items = detect_work_items(matrix, Factor::parse("0.5"));
    std::int64_t issue = date(rng);
    auto picked = select_bic_candidate(items, issue, 30);
    if (picked) {
      std::int64_t picked_time = -1;
      for (const WorkItem& item : items.items) {
        if (item.commit == *picked) picked_time = item.commit_time;
      }
      CHECK(picked_time < issue);
      CHECK(picked_time >= issue - 30LL * 86400);
    }
  }
}

TEST_CASE("matrix csv round-trips") {
  WorkedExample ex = worked_example();
  TrackingMatrix matrix = build_tracking_matrix(ex.fc, ex.history);
  std::string csv = matrix_to_csv(matrix);
  TrackingMatrix parsed = matrix_from_csv(csv);

  REQUIRE(parsed.columns.size() == matrix.columns.size());
  for (size_t j = 0; j < matrix.columns.size(); ++j) {
    CHECK(parsed.columns[j] == matrix.columns[j]);
  }
  REQUIRE(parsed.rows.size() == matrix.rows.size());
  for (size_t i = 0; i < matrix.rows.size(); ++i) {
    CHECK(parsed.rows[i].commit == matrix.rows[i].commit);
    CHECK(parsed.rows[i].commit_time == matrix.rows[i].commit_time);
    CHECK(parsed.rows[i].bits == matrix.rows[i].bits);
  }
  CHECK(matrix_to_csv(parsed) == csv);
}
