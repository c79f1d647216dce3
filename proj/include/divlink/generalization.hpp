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

#include "divlink/core.hpp"
#include "divlink/distribution.hpp"
#include "divlink/exec.hpp"

namespace divlink {

// A partition into intervals of consecutive quasi-identifiers under the fixed
// total order: classes are [bounds[k], bounds[k+1]) with
// 0 = bounds[0] < bounds[1] < ... < bounds.back() = q_size.
struct ContiguousPartition {
  std::int32_t q_size = 0;
  std::vector<std::int32_t> bounds;

  std::int32_t class_count() const {
    return static_cast<std::int32_t>(bounds.size()) - 1;
  }
  Partition to_partition() const;
};

struct GreedyStats {
  std::int64_t mass_updates = 0;  // per-attribute accumulations performed
};

// Single left-to-right sweep: extend the current class until it supports at
// least ell attributes at threshold p, then start the next one. A trailing
// class that cannot meet the constraint is merged into its predecessor.
// Optimal among admissible contiguous strategies; O(|Q|*|S|).
// Throws InfeasibleError when even the full alphabet fails the constraint
// (impossible for p <= p_ell).
ContiguousPartition greedy_generalize(const JointDistribution& dist,
                                      std::int32_t ell, double p,
                                      GreedyStats* stats = nullptr);

// Equal-size classes for product-form distributions: K = floor(theta *
// p_ell / p) classes of floor(|Q|/K) consecutive quasi-identifiers, remainder
// appended to the last class. When |Q| is not a multiple of K the truncated
// classes can fall short of the constraint; K is then lowered until every
// class passes (K = 1 always does for p <= p_ell). Throws ValidationError on
// non-product distributions or K < 1.
ContiguousPartition generalize_ind(const JointDistribution& dist,
                                   std::int32_t ell, double p);

// Exact maximum class count over all admissible contiguous partitions, by
// enumerating the 2^(|Q|-1) cut patterns. Guarded at |Q| <= 16. Returns 0
// when no admissible contiguous partition exists.
std::int32_t brute_force_optimal_contiguous(const JointDistribution& dist,
                                            std::int32_t ell, double p,
                                            Exec exec = Exec::kParallel);

// Exact maximum class count over ALL partitions of the alphabet (not just
// contiguous ones), by enumerating set partitions. Guarded at |Q| <= 8.
std::int32_t brute_force_optimal_unrestricted(const JointDistribution& dist,
                                              std::int32_t ell, double p);

struct ClassCountBounds {
  double lower = 0.0;          // floor(theta * p_ell / p)
  bool lower_applicable = false;   // requires product form
  double upper_uniform = 0.0;  // p_ell / p
  bool upper_applicable = false;   // requires uniform P_Q, product form
};

ClassCountBounds class_count_bounds(const DistributionSummary& summary,
                                    std::int32_t ell, double p);

// The finite grid of thresholds worth sweeping when tuning p: every mass
// P([a,b], s) of a contiguous interval, deduplicated and sorted ascending.
// Between consecutive values no support set changes, so the optimal class
// count over p in (0, p_ell] is attained on this grid. O(|Q|^2 |S|) values;
// guarded at |Q| <= 256.
std::vector<double> candidate_thresholds(const JointDistribution& dist);

}  // namespace divlink
