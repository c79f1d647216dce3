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

#include "divlink/generalization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "divlink/errors.hpp"

namespace divlink {
namespace {

constexpr std::int32_t kMaxContiguousAlphabet = 16;
constexpr std::int32_t kMaxUnrestrictedAlphabet = 8;

// Floor that forgives floating-point shortfall just below an integer, in the
// spirit of the tie tolerance used for ">= p" comparisons.
double floor_tol(double x) { return std::floor(x + 1e-9); }

// Support size of the interval [begin, end), accumulating rows in increasing
// order so that equal intervals always produce identical sums.
std::int32_t interval_support(const JointDistribution& dist,
                              std::int32_t begin, std::int32_t end, double p,
                              std::vector<double>& mass_scratch) {
  std::fill(mass_scratch.begin(), mass_scratch.end(), 0.0);
  for (QuasiId q = begin; q < end; ++q) {
    for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
      mass_scratch[static_cast<std::size_t>(s)] += dist.cell(q, s);
    }
  }
  return support_size(mass_scratch, p);
}

ContiguousPartition equal_size_partition(std::int32_t q_size, std::int32_t k) {
  ContiguousPartition part;
  part.q_size = q_size;
  const std::int32_t width = q_size / k;
  part.bounds.reserve(static_cast<std::size_t>(k) + 1);
  for (std::int32_t j = 0; j < k; ++j) part.bounds.push_back(j * width);
  part.bounds.push_back(q_size);  // remainder lands in the last class
  return part;
}

}  // namespace

Partition ContiguousPartition::to_partition() const {
  Partition out;
  out.q_size = q_size;
  out.classes.reserve(bounds.size() - 1);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    EquivalenceClass cls;
    for (QuasiId q = bounds[k]; q < bounds[k + 1]; ++q) cls.push_back(q);
    out.classes.push_back(std::move(cls));
  }
  return out;
}

ContiguousPartition greedy_generalize(const JointDistribution& dist,
                                      std::int32_t ell, double p,
                                      GreedyStats* stats) {
  if (ell < 1 || ell > dist.s_size()) {
    throw ValidationError("ell must lie in [1, |S|]");
  }
  if (!(p > 0.0) || p > 1.0) {
    throw ValidationError("threshold p must lie in (0, 1]");
  }

  ContiguousPartition part;
  part.q_size = dist.q_size();
  part.bounds.push_back(0);

  std::vector<double> mass(static_cast<std::size_t>(dist.s_size()), 0.0);
  for (QuasiId q = 0; q < dist.q_size(); ++q) {
    for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
      mass[static_cast<std::size_t>(s)] += dist.cell(q, s);
    }
    if (stats != nullptr) stats->mass_updates += dist.s_size();
    if (support_size(mass, p) >= ell) {
      part.bounds.push_back(q + 1);
      std::fill(mass.begin(), mass.end(), 0.0);
    }
  }
  if (part.bounds.back() != dist.q_size()) {
    // The trailing class cannot meet the constraint: fold it into its
    // predecessor (growing a class never shrinks its support set).
    if (part.bounds.size() == 1) {
      throw InfeasibleError(
          "no equivalence class can support ell attributes at p");
    }
    part.bounds.back() = dist.q_size();
  }
  return part;
}

ContiguousPartition generalize_ind(const JointDistribution& dist,
                                   std::int32_t ell, double p) {
  const auto summary = summarize(dist);
  if (!summary.product_form) {
    throw ValidationError(
        "equal-size generalization requires a product-form distribution");
  }
  if (ell < 1 || ell > dist.s_size()) {
    throw ValidationError("ell must lie in [1, |S|]");
  }
  const double pl = p_ell(summary, ell);
  if (!(p > 0.0)) throw ValidationError("threshold p must be positive");
  std::int32_t k =
      static_cast<std::int32_t>(floor_tol(summary.theta * pl / p));
  if (k < 1) {
    throw ValidationError("floor(theta * p_ell / p) must be at least 1");
  }
  k = std::min(k, dist.q_size());

  // When k divides |Q| every class passes the constraint by construction.
  // Otherwise the truncated classes may fall short; lower k until the
  // partition verifies (k = 1 is the full alphabet, which passes whenever
  // p <= p_ell).
  std::vector<double> scratch(static_cast<std::size_t>(dist.s_size()));
  for (; k >= 1; --k) {
    auto part = equal_size_partition(dist.q_size(), k);
    bool admissible = true;
    for (std::size_t j = 0; j + 1 < part.bounds.size(); ++j) {
      if (interval_support(dist, part.bounds[j], part.bounds[j + 1], p,
                           scratch) < ell) {
        admissible = false;
        break;
      }
    }
    if (admissible) return part;
  }
  throw InfeasibleError("no equal-size partition supports ell attributes at p");
}

std::int32_t brute_force_optimal_contiguous(const JointDistribution& dist,
                                            std::int32_t ell, double p,
                                            Exec exec) {
  if (dist.q_size() > kMaxContiguousAlphabet) {
    throw SizeGuardError("contiguous enumeration is limited to |Q| <= " +
                         std::to_string(kMaxContiguousAlphabet));
  }
  if (ell < 1 || ell > dist.s_size() || !(p > 0.0)) {
    throw ValidationError("need ell in [1, |S|] and p > 0");
  }
  const std::int32_t q = dist.q_size();
  const std::int64_t patterns = std::int64_t{1} << (q - 1);

  std::int32_t best = 0;
#pragma omp parallel for reduction(max : best) schedule(static) \
    if (exec == Exec::kParallel)
  for (std::int64_t mask = 0; mask < patterns; ++mask) {
    // Bit b of the mask cuts between quasi-identifiers b and b+1.
    std::vector<double> scratch(static_cast<std::size_t>(dist.s_size()));
    std::int32_t classes = 0;
    std::int32_t begin = 0;
    bool admissible = true;
    for (std::int32_t b = 0; b <= q - 1 && admissible; ++b) {
      const bool cut = (b == q - 1) || ((mask >> b) & 1);
      if (!cut) continue;
      if (interval_support(dist, begin, b + 1, p, scratch) < ell) {
        admissible = false;
      }
      ++classes;
      begin = b + 1;
    }
    if (admissible) best = std::max(best, classes);
  }
  return best;
}

std::int32_t brute_force_optimal_unrestricted(const JointDistribution& dist,
                                              std::int32_t ell, double p) {
  if (dist.q_size() > kMaxUnrestrictedAlphabet) {
    throw SizeGuardError("unrestricted enumeration is limited to |Q| <= " +
                         std::to_string(kMaxUnrestrictedAlphabet));
  }
  if (ell < 1 || ell > dist.s_size() || !(p > 0.0)) {
    throw ValidationError("need ell in [1, |S|] and p > 0");
  }
  const std::int32_t q = dist.q_size();

  // Enumerate set partitions via restricted growth strings: block[i] <=
  // 1 + max(block[0..i-1]).
  std::vector<std::int32_t> block(static_cast<std::size_t>(q), 0);
  std::vector<double> scratch(static_cast<std::size_t>(dist.s_size()));
  std::int32_t best = 0;

  auto evaluate = [&]() {
    const std::int32_t blocks =
        1 + *std::max_element(block.begin(), block.end());
    if (blocks <= best) return;
    for (std::int32_t b = 0; b < blocks; ++b) {
      std::fill(scratch.begin(), scratch.end(), 0.0);
      for (QuasiId i = 0; i < q; ++i) {
        if (block[static_cast<std::size_t>(i)] != b) continue;
        for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
          scratch[static_cast<std::size_t>(s)] += dist.cell(i, s);
        }
      }
      if (support_size(scratch, p) < ell) return;
    }
    best = blocks;
  };

  // Iterative successor over restricted growth strings.
  while (true) {
    evaluate();
    std::int32_t i = q - 1;
    for (; i > 0; --i) {
      std::int32_t prefix_max = 0;
      for (std::int32_t j = 0; j < i; ++j) {
        prefix_max = std::max(prefix_max, block[static_cast<std::size_t>(j)]);
      }
      if (block[static_cast<std::size_t>(i)] <= prefix_max) break;
    }
    if (i == 0) break;
    ++block[static_cast<std::size_t>(i)];
    std::fill(block.begin() + i + 1, block.end(), 0);
  }
  return best;
}

std::vector<double> candidate_thresholds(const JointDistribution& dist) {
  constexpr std::int32_t kMaxSweepAlphabet = 256;
  if (dist.q_size() > kMaxSweepAlphabet) {
    throw SizeGuardError("threshold sweep is limited to |Q| <= " +
                         std::to_string(kMaxSweepAlphabet));
  }
  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(dist.q_size()) *
                     (dist.q_size() + 1) / 2 * dist.s_size());
  std::vector<double> mass(static_cast<std::size_t>(dist.s_size()));
  for (QuasiId a = 0; a < dist.q_size(); ++a) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (QuasiId b = a; b < dist.q_size(); ++b) {
      for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
        mass[static_cast<std::size_t>(s)] += dist.cell(b, s);
        candidates.push_back(mass[static_cast<std::size_t>(s)]);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  return candidates;
}

ClassCountBounds class_count_bounds(const DistributionSummary& summary,
                                    std::int32_t ell, double p) {
  if (!(p > 0.0)) throw ValidationError("threshold p must be positive");
  const double pl = p_ell(summary, ell);
  ClassCountBounds bounds;
  bounds.lower = floor_tol(summary.theta * pl / p);
  bounds.lower_applicable = summary.product_form;
  bounds.upper_uniform = pl / p;
  bounds.upper_applicable =
      summary.product_form && std::abs(summary.theta - 1.0) <= 1e-9;
  return bounds;
}

}  // namespace divlink
