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

#include "divlink/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "divlink/errors.hpp"
#include "divlink/generalization.hpp"

namespace divlink {

double m_bound(const DistributionSummary& summary, std::int32_t ell, double p,
               std::int32_t q_size) {
  const double pl = p_ell(summary, ell);
  if (!(p > 0.0) || p > pl + kTieTolerance) {
    throw ValidationError("threshold p must lie in (0, p_ell]; p_ell = " +
                          std::to_string(pl));
  }
  // Tail sum of the |S| - ell + 1 smallest ordered marginals, accumulated
  // smallest-first for stability.
  double tail = 0.0;
  for (std::size_t i = summary.ordered_marginals.size();
       i >= static_cast<std::size_t>(ell); --i) {
    tail += summary.ordered_marginals[i - 1];
  }
  const double by_mass = 1.0 / (static_cast<double>(ell) * p);
  return std::min({static_cast<double>(q_size), by_mass, tail / p});
}

std::int64_t sample_size(double m_bound, std::int32_t ell, double p,
                         double delta) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ValidationError("sample-size formula needs p in (0, 1)");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("failure budget delta must lie in (0, 1)");
  }
  if (ell < 1 || !(m_bound > 0.0)) {
    throw ValidationError("sample-size formula needs ell >= 1 and m > 0");
  }
  const double ratio = m_bound * static_cast<double>(ell) / delta;
  if (!(ratio > 1.0)) {
    throw ValidationError("m * ell / delta must exceed 1");
  }
  // ln(1/(1-p)) via log1p for accuracy at small p.
  const double denom = -std::log1p(-p);
  return static_cast<std::int64_t>(std::ceil(std::log(ratio) / denom));
}

MechanismPlan plan(const JointDistribution& dist, std::int32_t ell,
                   double delta, double p, Strategy strategy) {
  const auto summary = summarize(dist);
  if (ell < 1 || ell > dist.s_size()) {
    throw ValidationError("ell must lie in [1, |S|]");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("failure budget delta must lie in (0, 1)");
  }
  const double pl = p_ell(summary, ell);
  if (!(p > 0.0) || p > pl + kTieTolerance) {
    throw ValidationError("threshold p must lie in (0, p_ell]; p_ell = " +
                          std::to_string(pl));
  }

  MechanismPlan out;
  out.ell = ell;
  out.delta = delta;
  out.p = p;
  switch (strategy) {
    case Strategy::kTrivial:
      out.partition = Partition::single_class(dist.q_size());
      break;
    case Strategy::kGreedy:
      out.partition = greedy_generalize(dist, ell, p).to_partition();
      break;
    case Strategy::kInd:
      out.partition = generalize_ind(dist, ell, p).to_partition();
      break;
  }

  for (std::int32_t c = 0; c < out.partition.class_count(); ++c) {
    const auto& cls = out.partition.classes[static_cast<std::size_t>(c)];
    if (static_cast<std::int32_t>(support_set(dist, cls, p).size()) < ell) {
      throw InfeasibleError("class " + std::to_string(c) +
                            " supports fewer than ell attributes at p");
    }
  }

  out.m_bound = m_bound(summary, ell, p, dist.q_size());
  out.sample_size = sample_size(out.m_bound, ell, p, delta);
  return out;
}

std::vector<SensitiveAttr> top_support(const JointDistribution& dist,
                                       std::span<const QuasiId> cls,
                                       std::int32_t ell) {
  if (ell < 0 || ell > dist.s_size()) {
    throw ValidationError("ell must lie in [0, |S|]");
  }
  const auto mass = class_mass(dist, cls);
  std::vector<SensitiveAttr> order(static_cast<std::size_t>(dist.s_size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](SensitiveAttr a, SensitiveAttr b) {
                     return mass[static_cast<std::size_t>(a)] >
                            mass[static_cast<std::size_t>(b)];
                   });
  order.resize(static_cast<std::size_t>(ell));
  return order;
}

}  // namespace divlink
