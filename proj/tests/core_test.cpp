// Copyright 2026 The divlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "divlink/core.hpp"
#include "divlink/errors.hpp"
#include "divlink/rng.hpp"

using namespace divlink;

namespace {

Partition make_partition(std::int32_t q_size,
                         std::vector<EquivalenceClass> classes) {
  Partition p;
  p.q_size = q_size;
  p.classes = std::move(classes);
  return p;
}

Dataset random_dataset(std::int32_t q_size, std::int32_t s_size,
                       std::int64_t n, std::uint64_t seed) {
  Dataset d;
  d.q_size = q_size;
  d.s_size = s_size;
  SplitMix64 rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    d.records.push_back(
        Record{static_cast<QuasiId>(rng.next() % q_size),
               static_cast<SensitiveAttr>(rng.next() % s_size)});
  }
  return d;
}

// The five-record hospital table: quasi-identifiers indexed lexicographically
// as (F,560010)=0 < (M,560011)=1 < (M,560012)=2; diseases as cervical=0,
// heart=1, lung=2, osteoporosis=3.
Dataset hospital_table() {
  Dataset d;
  d.q_size = 3;
  d.s_size = 4;
  d.records = {{2, 1}, {1, 2}, {0, 3}, {0, 0}, {0, 3}};
  return d;
}

}  // namespace

TEST_CASE("anonymize tallies the hospital table") {
  const auto anon =
      anonymize(hospital_table(), make_partition(3, {{1, 2}, {0}}));
  REQUIRE(anon.counts.size() == 2);
  CHECK(anon.counts[0] == std::vector<std::int64_t>{0, 1, 1, 0});
  CHECK(anon.counts[1] == std::vector<std::int64_t>{1, 0, 0, 2});
  CHECK(anon.total_count() == 5);
  CHECK(diversity(anon) == 2);
}

TEST_CASE("anonymize of an empty dataset yields all-zero counts") {
  Dataset d;
  d.q_size = 4;
  d.s_size = 3;
  const auto anon = anonymize(d, make_partition(4, {{0, 1}, {2, 3}}));
  CHECK(anon.total_count() == 0);
  // No nonempty class: the minimum is vacuous, the maximum value is reported.
  CHECK(diversity(anon) == 3);
}

TEST_CASE("anonymize matches an independent per-cell tally") {
  Dataset d;
  d.q_size = 2;
  d.s_size = 3;
  d.records = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  const auto partition = make_partition(2, {{0}, {1}});
  const auto anon = anonymize(d, partition);

  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> tally;
  for (const Record& r : d.records) {
    const std::int32_t cls = (r.qid == 0) ? 0 : 1;
    ++tally[{cls, r.sens}];
  }
  for (std::int32_t c = 0; c < 2; ++c) {
    for (std::int32_t s = 0; s < 3; ++s) {
      CHECK(anon.counts[c][s] == tally[{c, s}]);
    }
  }
}

TEST_CASE("single class with a single record has diversity 1") {
  Dataset d;
  d.q_size = 1;
  d.s_size = 5;
  d.records = {{0, 3}};
  CHECK(diversity(anonymize(d, Partition::single_class(1))) == 1);
}

TEST_CASE("diversity equals the brute-force distinct-value minimum") {
  const auto d = random_dataset(6, 4, 20, 7001);
  const auto partition = make_partition(6, {{0, 3}, {1, 4}, {2, 5}});
  const auto anon = anonymize(d, partition);

  std::int32_t expected = 4;
  for (const auto& cls : partition.classes) {
    std::set<SensitiveAttr> values;
    std::int64_t total = 0;
    for (const Record& r : d.records) {
      if (std::find(cls.begin(), cls.end(), r.qid) != cls.end()) {
        values.insert(r.sens);
        ++total;
      }
    }
    if (total > 0) {
      expected = std::min(expected, static_cast<std::int32_t>(values.size()));
    }
  }
  CHECK(diversity(anon) == expected);
}

TEST_CASE("validate_partition") {
  SUBCASE("disjoint full cover is ok") {
    CHECK(!validate_partition(make_partition(3, {{0, 1}, {2}}), 3));
  }
  SUBCASE("overlap is reported with the offending qid") {
    const auto v = validate_partition(make_partition(3, {{0, 1}, {1, 2}}), 3);
    REQUIRE(v.has_value());
    CHECK(v->kind == PartitionViolation::Kind::kOverlap);
    CHECK(v->qid == 1);
  }
  SUBCASE("coverage gap is reported with the missing qid") {
    const auto v = validate_partition(make_partition(3, {{0}, {2}}), 3);
    REQUIRE(v.has_value());
    CHECK(v->kind == PartitionViolation::Kind::kCoverageGap);
    CHECK(v->qid == 1);
  }
}

TEST_CASE("anonymize rejects invalid inputs") {
  CHECK_THROWS_AS(
      anonymize(hospital_table(), make_partition(3, {{0, 1}})),
      ValidationError);
  Dataset bad = hospital_table();
  bad.records.push_back({5, 0});
  CHECK_THROWS_AS(anonymize(bad, make_partition(3, {{1, 2}, {0}})),
                  ValidationError);
}

TEST_CASE("total count is preserved for random datasets and partitions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed * 977 + 3);
    const auto q = static_cast<std::int32_t>(2 + rng.next() % 7);
    const auto s = static_cast<std::int32_t>(2 + rng.next() % 5);
    const auto n = static_cast<std::int64_t>(rng.next() % 60);
    const auto d = random_dataset(q, s, n, seed);

    // Random full-coverage partition: the first n_classes qids seed the
    // classes, the rest land anywhere.
    const auto n_classes = static_cast<std::int32_t>(1 + rng.next() % q);
    std::vector<EquivalenceClass> classes(static_cast<std::size_t>(n_classes));
    for (QuasiId i = 0; i < q; ++i) {
      classes[i < n_classes ? static_cast<std::size_t>(i)
                            : rng.next() % n_classes]
          .push_back(i);
    }
    const auto partition = make_partition(q, std::move(classes));
    const auto anon = anonymize(d, partition);
    CHECK(anon.total_count() == d.size());

    // The definitional property of the returned value: every nonempty class
    // reaches it, and some nonempty class attains it exactly.
    const auto ell = diversity(anon);
    bool attained = d.records.empty();
    for (std::int32_t c = 0; c < partition.class_count(); ++c) {
      if (anon.class_total(c) == 0) continue;
      std::int32_t distinct = 0;
      for (auto count : anon.counts[static_cast<std::size_t>(c)]) {
        distinct += count > 0;
      }
      CHECK(distinct >= ell);
      attained |= (distinct == ell);
    }
    CHECK(attained);
  }
}

TEST_CASE("diversity is invariant under record order and attribute relabeling") {
  const auto d = random_dataset(5, 4, 30, 99);
  const auto partition = make_partition(5, {{0, 1, 2}, {3, 4}});
  const auto base = diversity(anonymize(d, partition));

  Dataset shuffled = d;
  std::reverse(shuffled.records.begin(), shuffled.records.end());
  std::swap(shuffled.records.front(), shuffled.records.back());
  CHECK(diversity(anonymize(shuffled, partition)) == base);

  const std::vector<SensitiveAttr> relabel = {2, 3, 0, 1};
  Dataset renamed = d;
  for (Record& r : renamed.records) {
    r.sens = relabel[static_cast<std::size_t>(r.sens)];
  }
  CHECK(diversity(anonymize(renamed, partition)) == base);
}
