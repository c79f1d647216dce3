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

#include "divlink/distribution.hpp"
#include "divlink/exec.hpp"
#include "divlink/mechanism.hpp"

namespace divlink {

// Outcome of a Monte Carlo run. A trial fails when some class of the plan's
// partition ends up with fewer than ell distinct (surviving) attributes; a
// class that received no records counts as failed, since the mechanism's
// guarantee quantifies over every class. The histogram buckets the per-trial
// minimum distinct-attribute count over all classes (index 0..s_size), so
// failures equals the sum of buckets below ell. That minimum coincides with
// the dataset's diversity value whenever every class is nonempty.
struct TrialReport {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double empirical_rate = 0.0;
  double bound = 0.0;  // delta for a single dataset, t*delta after linkage
  std::uint64_t seed = 0;
  std::vector<std::int64_t> histogram;

  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

// Monte Carlo check of the single-dataset guarantee: each trial samples
// plan.sample_size i.i.d. records, generalizes them with plan.partition, and
// tests every class for ell distinct attributes. Trial i draws from a
// SplitMix64 stream seeded with seed + i, so reports are deterministic and
// independent of the execution policy.
TrialReport simulate_single(const MechanismPlan& plan,
                            const JointDistribution& dist, std::int64_t trials,
                            std::uint64_t seed, Exec exec = Exec::kParallel);

// Monte Carlo check of the linkage guarantee: each trial samples t
// independent datasets of plan.sample_size records (owner j of trial i draws
// from seed (seed + i) * t + j), generalizes each with the shared partition,
// links them, and tests every class for ell distinct surviving attributes.
// The reported bound is t * delta. t = 1 degenerates to simulate_single.
TrialReport simulate_linkage(const MechanismPlan& plan,
                             const JointDistribution& dist, std::int32_t t,
                             std::int64_t trials, std::uint64_t seed,
                             Exec exec = Exec::kParallel);

}  // namespace divlink
