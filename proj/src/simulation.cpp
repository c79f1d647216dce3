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

#include "divlink/simulation.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "divlink/errors.hpp"
#include "divlink/rng.hpp"

namespace divlink {
namespace {

// One owner's dataset, reduced to the per-class attribute-presence flags.
void observe_dataset(const CellSampler& sampler,
                     const std::vector<std::int32_t>& lookup,
                     std::int32_t n_classes, std::int32_t s_size,
                     std::int64_t n_records, std::uint64_t seed,
                     std::vector<std::uint8_t>& seen) {
  seen.assign(static_cast<std::size_t>(n_classes) * s_size, 0);
  SplitMix64 rng(seed);
  for (std::int64_t i = 0; i < n_records; ++i) {
    const Record r = sampler.draw(rng);
    const std::int32_t c = lookup[static_cast<std::size_t>(r.qid)];
    seen[static_cast<std::size_t>(c) * s_size + r.sens] = 1;
  }
}

// Minimum distinct-attribute count over all classes given presence flags
// ANDed across owners; an untouched class contributes 0.
std::int32_t min_distinct(const std::vector<std::uint8_t>& surviving,
                          std::int32_t n_classes, std::int32_t s_size) {
  std::int32_t best = s_size;
  for (std::int32_t c = 0; c < n_classes; ++c) {
    std::int32_t distinct = 0;
    for (std::int32_t s = 0; s < s_size; ++s) {
      distinct += surviving[static_cast<std::size_t>(c) * s_size + s];
    }
    best = std::min(best, distinct);
  }
  return best;
}

TrialReport fold_trials(const std::vector<std::int32_t>& per_trial,
                        std::int32_t ell, std::int32_t s_size, double bound,
                        std::uint64_t seed) {
  TrialReport report;
  report.trials = static_cast<std::int64_t>(per_trial.size());
  report.bound = bound;
  report.seed = seed;
  report.histogram.assign(static_cast<std::size_t>(s_size) + 1, 0);
  for (std::int32_t v : per_trial) {
    ++report.histogram[static_cast<std::size_t>(v)];
    if (v < ell) ++report.failures;
  }
  report.empirical_rate =
      static_cast<double>(report.failures) / static_cast<double>(report.trials);
  return report;
}

void check_simulation_args(const MechanismPlan& plan,
                           const JointDistribution& dist,
                           std::int64_t trials) {
  if (plan.sample_size < 1) {
    throw ValidationError("plan sample size must be >= 1");
  }
  if (trials < 1) throw ValidationError("need at least 1 trial");
  if (plan.partition.q_size != dist.q_size()) {
    throw ValidationError("plan partition and distribution disagree on |Q|");
  }
  if (auto violation = validate_partition(plan.partition, dist.q_size())) {
    throw ValidationError("invalid plan partition: " + violation->message);
  }
}

}  // namespace

TrialReport simulate_single(const MechanismPlan& plan,
                            const JointDistribution& dist, std::int64_t trials,
                            std::uint64_t seed, Exec exec) {
  check_simulation_args(plan, dist, trials);
  const auto lookup = plan.partition.class_lookup();
  const CellSampler sampler(dist);
  const std::int32_t n_classes = plan.partition.class_count();
  const std::int32_t s_size = dist.s_size();

  std::vector<std::int32_t> per_trial(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t i = 0; i < trials; ++i) {
    std::vector<std::uint8_t> seen;
    observe_dataset(sampler, lookup, n_classes, s_size, plan.sample_size,
                    seed + static_cast<std::uint64_t>(i), seen);
    per_trial[static_cast<std::size_t>(i)] =
        min_distinct(seen, n_classes, s_size);
  }
  return fold_trials(per_trial, plan.ell, s_size, plan.delta, seed);
}

TrialReport simulate_linkage(const MechanismPlan& plan,
                             const JointDistribution& dist, std::int32_t t,
                             std::int64_t trials, std::uint64_t seed,
                             Exec exec) {
  check_simulation_args(plan, dist, trials);
  if (t < 1) throw ValidationError("need at least 1 data owner");
  const auto lookup = plan.partition.class_lookup();
  const CellSampler sampler(dist);
  const std::int32_t n_classes = plan.partition.class_count();
  const std::int32_t s_size = dist.s_size();

  std::vector<std::int32_t> per_trial(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
    std::vector<std::uint8_t> surviving(
        static_cast<std::size_t>(n_classes) * s_size, 1);
    std::vector<std::uint8_t> seen;
    for (std::int32_t j = 0; j < t; ++j) {
      observe_dataset(sampler, lookup, n_classes, s_size, plan.sample_size,
                      trial_seed * static_cast<std::uint64_t>(t) +
                          static_cast<std::uint64_t>(j),
                      seen);
      for (std::size_t k = 0; k < surviving.size(); ++k) {
        surviving[k] = static_cast<std::uint8_t>(surviving[k] & seen[k]);
      }
    }
    per_trial[static_cast<std::size_t>(i)] =
        min_distinct(surviving, n_classes, s_size);
  }
  return fold_trials(per_trial, plan.ell, s_size, t * plan.delta, seed);
}

}  // namespace divlink
