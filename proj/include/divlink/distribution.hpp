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
#include <vector>

#include "divlink/core.hpp"
#include "divlink/rng.hpp"

namespace divlink {

// Tolerance for ">= p" threshold comparisons, so that support sets are stable
// under floating-point summation order.
inline constexpr double kTieTolerance = 1e-12;

// Maximum allowed deviation of a probability table's sum from 1; smaller
// deviations are renormalized away, larger ones are hard errors.
inline constexpr double kProbSumTolerance = 1e-9;

// Joint distribution over (quasi-identifier, sensitive attribute) cells.
// Immutable after construction; both marginals are strictly positive.
class JointDistribution {
 public:
  // Validates and renormalizes a row-major q_size x s_size table.
  JointDistribution(std::int32_t q_size, std::int32_t s_size,
                    std::vector<double> probs);

  static JointDistribution product(std::vector<double> q_marginal,
                                   std::vector<double> s_marginal);
  static JointDistribution uniform(std::int32_t q_size, std::int32_t s_size);
  // Uniform quasi-identifier marginal, sensitive marginal P_S(s) proportional
  // to rho^s (normalized), 0 < rho < 1.
  static JointDistribution geometric(std::int32_t q_size, std::int32_t s_size,
                                     double rho);

  std::int32_t q_size() const { return q_size_; }
  std::int32_t s_size() const { return s_size_; }
  double cell(QuasiId q, SensitiveAttr s) const {
    return probs_[static_cast<std::size_t>(q) * s_size_ + s];
  }
  std::span<const double> row(QuasiId q) const {
    return {probs_.data() + static_cast<std::size_t>(q) * s_size_,
            static_cast<std::size_t>(s_size_)};
  }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& q_marginal() const { return q_marginal_; }
  const std::vector<double>& s_marginal() const { return s_marginal_; }

 private:
  std::int32_t q_size_;
  std::int32_t s_size_;
  std::vector<double> probs_;  // row-major [q][s]
  std::vector<double> q_marginal_;
  std::vector<double> s_marginal_;
};

// Order statistics of the sensitive marginal plus the quasi-identifier
// skewness factor theta = |Q| * min_q P_Q(q).
struct DistributionSummary {
  std::vector<double> ordered_marginals;  // p_1 >= p_2 >= ... >= p_|S|
  std::vector<SensitiveAttr> order;       // attribute behind each p_i
  double theta = 0.0;
  bool product_form = false;  // P == P_Q * P_S within tolerance
};

DistributionSummary summarize(const JointDistribution& dist);

// p_ell: the ell-th largest sensitive-attribute marginal, 1 <= ell <= |S|.
double p_ell(const DistributionSummary& summary, std::int32_t ell);

// Per-attribute mass of an equivalence class: component s is
// sum over q in the class of P(q, s).
std::vector<double> class_mass(const JointDistribution& dist,
                               std::span<const QuasiId> cls);

// Attributes whose class mass reaches the threshold p (with tie tolerance).
std::vector<SensitiveAttr> support_set(const JointDistribution& dist,
                                       std::span<const QuasiId> cls, double p);

std::int32_t support_size(std::span<const double> mass, double p);

// Inverse-CDF sampler over the flattened q*s cell probabilities. Cells are
// laid out row-major; the cumulative sums are fixed at construction, so draws
// are reproducible bit-for-bit given the generator state.
class CellSampler {
 public:
  explicit CellSampler(const JointDistribution& dist);
  Record draw(SplitMix64& rng) const;

 private:
  std::vector<double> cdf_;
  std::int32_t s_size_;
};

// n i.i.d. records from the distribution, deterministic given the seed.
Dataset sample_dataset(const JointDistribution& dist, std::int64_t n,
                       std::uint64_t seed);

}  // namespace divlink
