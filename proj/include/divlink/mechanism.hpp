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
#include <span>

#include "divlink/core.hpp"
#include "divlink/distribution.hpp"

namespace divlink {

// The central anonymizer's broadcast object: diversity target ell, failure
// budget delta, mass threshold p, the class-count bound, the sample size N
// data owners must accumulate, and the equivalence classes.
struct MechanismPlan {
  std::int32_t ell = 0;
  double delta = 0.0;
  double p = 0.0;
  double m_bound = 0.0;
  std::int64_t sample_size = 0;
  Partition partition;
};

// Upper bound on the number of admissible equivalence classes:
// min{ |Q|, 1/(ell*p), (sum of the |S|-ell+1 smallest ordered marginals)/p }.
// Kept as a real; flooring could under-report the sample size downstream.
double m_bound(const DistributionSummary& summary, std::int32_t ell, double p,
               std::int32_t q_size);

// Smallest integer N with m*ell*(1-p)^N <= delta:
// ceil( ln(m*ell/delta) / ln(1/(1-p)) ). Rounded up so the guarantee is
// preserved. Requires p, delta in (0,1) and m*ell/delta > 1.
std::int64_t sample_size(double m_bound, std::int32_t ell, double p,
                         double delta);

enum class Strategy {
  kGreedy,
  kInd,
  kTrivial,  // the single class containing all of Q
};

// Full planning step: build a partition with the chosen strategy, re-check
// that every class supports at least ell attributes at threshold p, and fill
// in the bound and sample size.
MechanismPlan plan(const JointDistribution& dist, std::int32_t ell,
                   double delta, double p, Strategy strategy);

// Diagnostic accessor: the ell attributes of a class with the largest mass
// (ties broken by attribute index). Not used by planning.
std::vector<SensitiveAttr> top_support(const JointDistribution& dist,
                                       std::span<const QuasiId> cls,
                                       std::int32_t ell);

}  // namespace divlink
