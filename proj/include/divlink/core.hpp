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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace divlink {

// Quasi-identifiers and sensitive attributes are dense indices into their
// alphabets. Quasi-identifier order is the fixed total order used by the
// contiguous generalization strategies; display labels (e.g. the original
// postal-code/gender/age tuple) live in the io layer, which flattens them
// lexicographically before anything reaches the core.
using QuasiId = std::int32_t;
using SensitiveAttr = std::int32_t;

struct Record {
  QuasiId qid = 0;
  SensitiveAttr sens = 0;
};

// A raw dataset: an ordered multiset of records over declared alphabets.
// User identities are assumed dropped before this type exists.
struct Dataset {
  std::int32_t q_size = 0;
  std::int32_t s_size = 0;
  std::vector<Record> records;

  std::int64_t size() const { return static_cast<std::int64_t>(records.size()); }
};

// One equivalence class: a non-empty set of quasi-identifiers, kept sorted.
using EquivalenceClass = std::vector<QuasiId>;

// A generalization of the quasi-identifier alphabet: pairwise-disjoint
// classes. Anonymization requires full coverage of [0, q_size); the
// post-linkage dataset may carry a partial partition (dropped classes have no
// surviving records).
struct Partition {
  std::int32_t q_size = 0;
  std::vector<EquivalenceClass> classes;

  std::int32_t class_count() const { return static_cast<std::int32_t>(classes.size()); }

  // q -> class index, -1 where uncovered.
  std::vector<std::int32_t> class_lookup() const;

  static Partition single_class(std::int32_t q_size);
};

struct PartitionViolation {
  enum class Kind { kOverlap, kCoverageGap };
  Kind kind;
  QuasiId qid;                // first offending quasi-identifier
  std::int32_t first_class;   // class involved (overlap: earlier class)
  std::int32_t second_class;  // overlap: later class; gap: -1
  std::string message;
};

// Checks pairwise disjointness and full coverage of [0, q_size). Returns the
// first violation found, or nullopt when the partition is valid.
std::optional<PartitionViolation> validate_partition(const Partition& partition,
                                                     std::int32_t q_size);

// The sufficient statistic of an anonymized dataset: per-class,
// per-sensitive-attribute record counts.
struct AnonymizedDataset {
  Partition partition;
  std::int32_t s_size = 0;
  std::vector<std::vector<std::int64_t>> counts;  // [class][sensitive attr]

  std::int64_t total_count() const;
  std::int64_t class_total(std::int32_t c) const;
};

// Generalizes a dataset under a full-coverage partition by tallying records
// per (class, sensitive attribute). Throws ValidationError on alphabet
// mismatch or partition violations.
AnonymizedDataset anonymize(const Dataset& dataset, const Partition& partition);

// Exact diversity value: the largest l such that every class with at least
// one record contains at least l distinct sensitive attributes, i.e. the
// minimum distinct-attribute count over nonempty classes. Classes with zero
// records are skipped. With no nonempty class at all the minimum is vacuous
// and the maximum possible value s_size is returned.
std::int32_t diversity(const AnonymizedDataset& anon);

}  // namespace divlink
