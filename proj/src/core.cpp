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

#include "divlink/core.hpp"

#include <algorithm>
#include <numeric>

#include "divlink/errors.hpp"

namespace divlink {

std::vector<std::int32_t> Partition::class_lookup() const {
  std::vector<std::int32_t> lookup(static_cast<std::size_t>(q_size), -1);
  for (std::int32_t c = 0; c < class_count(); ++c) {
    for (QuasiId q : classes[c]) {
      if (q < 0 || q >= q_size) {
        throw ValidationError("partition class member " + std::to_string(q) +
                              " outside quasi-identifier alphabet [0, " +
                              std::to_string(q_size) + ")");
      }
      lookup[static_cast<std::size_t>(q)] = c;
    }
  }
  return lookup;
}

Partition Partition::single_class(std::int32_t q_size) {
  Partition p;
  p.q_size = q_size;
  EquivalenceClass all(static_cast<std::size_t>(q_size));
  std::iota(all.begin(), all.end(), 0);
  p.classes.push_back(std::move(all));
  return p;
}

std::optional<PartitionViolation> validate_partition(const Partition& partition,
                                                     std::int32_t q_size) {
  std::vector<std::int32_t> owner(static_cast<std::size_t>(q_size), -1);
  for (std::int32_t c = 0; c < partition.class_count(); ++c) {
    const auto& cls = partition.classes[c];
    if (cls.empty()) {
      return PartitionViolation{PartitionViolation::Kind::kCoverageGap, -1, c,
                                -1, "class " + std::to_string(c) + " is empty"};
    }
    for (QuasiId q : cls) {
      if (q < 0 || q >= q_size) {
        return PartitionViolation{
            PartitionViolation::Kind::kCoverageGap, q, c, -1,
            "quasi-identifier " + std::to_string(q) + " outside [0, " +
                std::to_string(q_size) + ")"};
      }
      if (owner[static_cast<std::size_t>(q)] != -1) {
        return PartitionViolation{
            PartitionViolation::Kind::kOverlap, q,
            owner[static_cast<std::size_t>(q)], c,
            "quasi-identifier " + std::to_string(q) + " appears in classes " +
                std::to_string(owner[static_cast<std::size_t>(q)]) + " and " +
                std::to_string(c)};
      }
      owner[static_cast<std::size_t>(q)] = c;
    }
  }
  for (QuasiId q = 0; q < q_size; ++q) {
    if (owner[static_cast<std::size_t>(q)] == -1) {
      return PartitionViolation{PartitionViolation::Kind::kCoverageGap, q, -1,
                                -1,
                                "quasi-identifier " + std::to_string(q) +
                                    " is not covered by any class"};
    }
  }
  return std::nullopt;
}

std::int64_t AnonymizedDataset::total_count() const {
  std::int64_t total = 0;
  for (const auto& row : counts) {
    for (std::int64_t c : row) total += c;
  }
  return total;
}

std::int64_t AnonymizedDataset::class_total(std::int32_t c) const {
  const auto& row = counts[static_cast<std::size_t>(c)];
  return std::accumulate(row.begin(), row.end(), std::int64_t{0});
}

AnonymizedDataset anonymize(const Dataset& dataset, const Partition& partition) {
  if (partition.q_size != dataset.q_size) {
    throw ValidationError("partition is over " +
                          std::to_string(partition.q_size) +
                          " quasi-identifiers, dataset declares " +
                          std::to_string(dataset.q_size));
  }
  if (auto violation = validate_partition(partition, dataset.q_size)) {
    throw ValidationError("invalid partition: " + violation->message);
  }
  const auto lookup = partition.class_lookup();

  AnonymizedDataset anon;
  anon.partition = partition;
  anon.s_size = dataset.s_size;
  anon.counts.assign(static_cast<std::size_t>(partition.class_count()),
                     std::vector<std::int64_t>(
                         static_cast<std::size_t>(dataset.s_size), 0));
  for (const Record& r : dataset.records) {
    if (r.qid < 0 || r.qid >= dataset.q_size || r.sens < 0 ||
        r.sens >= dataset.s_size) {
      throw ValidationError("record (" + std::to_string(r.qid) + ", " +
                            std::to_string(r.sens) +
                            ") outside declared alphabets");
    }
    const std::int32_t c = lookup[static_cast<std::size_t>(r.qid)];
    if (c < 0) {
      throw ValidationError("quasi-identifier " + std::to_string(r.qid) +
                            " not covered by the partition");
    }
    ++anon.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(r.sens)];
  }
  return anon;
}

std::int32_t diversity(const AnonymizedDataset& anon) {
  std::int32_t min_distinct = anon.s_size;
  for (const auto& row : anon.counts) {
    std::int32_t distinct = 0;
    for (std::int64_t c : row) {
      if (c > 0) ++distinct;
    }
    if (distinct > 0) min_distinct = std::min(min_distinct, distinct);
  }
  return min_distinct;
}

}  // namespace divlink
