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

#include "divlink/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "divlink/errors.hpp"

namespace divlink {

JointDistribution::JointDistribution(std::int32_t q_size, std::int32_t s_size,
                                     std::vector<double> probs)
    : q_size_(q_size), s_size_(s_size), probs_(std::move(probs)) {
  if (q_size_ < 1 || s_size_ < 1) {
    throw ValidationError("distribution needs at least one quasi-identifier "
                          "and one sensitive attribute");
  }
  if (probs_.size() != static_cast<std::size_t>(q_size_) * s_size_) {
    throw ValidationError("probability table has " +
                          std::to_string(probs_.size()) + " entries, expected " +
                          std::to_string(static_cast<std::size_t>(q_size_) *
                                         s_size_));
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("probability entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    throw ValidationError("probability table sums to " + std::to_string(sum) +
                          ", more than 1e-9 away from 1");
  }
  for (double& v : probs_) v /= sum;

  q_marginal_.assign(static_cast<std::size_t>(q_size_), 0.0);
  s_marginal_.assign(static_cast<std::size_t>(s_size_), 0.0);
  for (QuasiId q = 0; q < q_size_; ++q) {
    for (SensitiveAttr s = 0; s < s_size_; ++s) {
      const double v = cell(q, s);
      q_marginal_[static_cast<std::size_t>(q)] += v;
    }
  }
  // Column sums in increasing q order, matching class_mass over the full
  // alphabet bit for bit.
  for (SensitiveAttr s = 0; s < s_size_; ++s) {
    double col = 0.0;
    for (QuasiId q = 0; q < q_size_; ++q) col += cell(q, s);
    s_marginal_[static_cast<std::size_t>(s)] = col;
  }
  for (QuasiId q = 0; q < q_size_; ++q) {
    if (!(q_marginal_[static_cast<std::size_t>(q)] > 0.0)) {
      throw ValidationError("quasi-identifier marginal must be positive (q=" +
                            std::to_string(q) + ")");
    }
  }
  for (SensitiveAttr s = 0; s < s_size_; ++s) {
    if (!(s_marginal_[static_cast<std::size_t>(s)] > 0.0)) {
      throw ValidationError("sensitive marginal must be positive (s=" +
                            std::to_string(s) + ")");
    }
  }
}

JointDistribution JointDistribution::product(std::vector<double> q_marginal,
                                             std::vector<double> s_marginal) {
  const auto q = static_cast<std::int32_t>(q_marginal.size());
  const auto s = static_cast<std::int32_t>(s_marginal.size());
  std::vector<double> probs(q_marginal.size() * s_marginal.size());
  for (std::int32_t i = 0; i < q; ++i) {
    for (std::int32_t j = 0; j < s; ++j) {
      probs[static_cast<std::size_t>(i) * s + j] =
          q_marginal[static_cast<std::size_t>(i)] *
          s_marginal[static_cast<std::size_t>(j)];
    }
  }
  return JointDistribution(q, s, std::move(probs));
}

JointDistribution JointDistribution::uniform(std::int32_t q_size,
                                             std::int32_t s_size) {
  if (q_size < 1 || s_size < 1) {
    throw ValidationError("uniform distribution needs positive alphabets");
  }
  return product(std::vector<double>(static_cast<std::size_t>(q_size),
                                     1.0 / q_size),
                 std::vector<double>(static_cast<std::size_t>(s_size),
                                     1.0 / s_size));
}

JointDistribution JointDistribution::geometric(std::int32_t q_size,
                                               std::int32_t s_size,
                                               double rho) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw ValidationError("geometric ratio must lie in (0, 1)");
  }
  if (q_size < 1 || s_size < 1) {
    throw ValidationError("geometric distribution needs positive alphabets");
  }
  // P_S(s) = p1 * rho^s with p1 = (1 - rho) / (1 - rho^|S|).
  std::vector<double> sm(static_cast<std::size_t>(s_size));
  const double p1 = (1.0 - rho) / (1.0 - std::pow(rho, s_size));
  double v = p1;
  for (std::int32_t s = 0; s < s_size; ++s, v *= rho) {
    sm[static_cast<std::size_t>(s)] = v;
  }
  return product(std::vector<double>(static_cast<std::size_t>(q_size),
                                     1.0 / q_size),
                 std::move(sm));
}

DistributionSummary summarize(const JointDistribution& dist) {
  DistributionSummary summary;
  const auto s = static_cast<std::size_t>(dist.s_size());
  summary.order.resize(s);
  std::iota(summary.order.begin(), summary.order.end(), 0);
  // Stable sort: ties keep attribute-index order.
  std::stable_sort(summary.order.begin(), summary.order.end(),
                   [&](SensitiveAttr a, SensitiveAttr b) {
                     return dist.s_marginal()[static_cast<std::size_t>(a)] >
                            dist.s_marginal()[static_cast<std::size_t>(b)];
                   });
  summary.ordered_marginals.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    summary.ordered_marginals[i] =
        dist.s_marginal()[static_cast<std::size_t>(summary.order[i])];
  }
  const double min_q = *std::min_element(dist.q_marginal().begin(),
                                         dist.q_marginal().end());
  summary.theta = dist.q_size() * min_q;

  summary.product_form = true;
  for (QuasiId q = 0; q < dist.q_size() && summary.product_form; ++q) {
    for (SensitiveAttr a = 0; a < dist.s_size(); ++a) {
      const double expected = dist.q_marginal()[static_cast<std::size_t>(q)] *
                              dist.s_marginal()[static_cast<std::size_t>(a)];
      if (std::abs(dist.cell(q, a) - expected) > kProbSumTolerance) {
        summary.product_form = false;
        break;
      }
    }
  }
  return summary;
}

double p_ell(const DistributionSummary& summary, std::int32_t ell) {
  if (ell < 1 || static_cast<std::size_t>(ell) > summary.ordered_marginals.size()) {
    throw ValidationError("ell must lie in [1, |S|], got " +
                          std::to_string(ell));
  }
  return summary.ordered_marginals[static_cast<std::size_t>(ell - 1)];
}

std::vector<double> class_mass(const JointDistribution& dist,
                               std::span<const QuasiId> cls) {
  std::vector<double> mass(static_cast<std::size_t>(dist.s_size()), 0.0);
  for (QuasiId q : cls) {
    if (q < 0 || q >= dist.q_size()) {
      throw ValidationError("class member " + std::to_string(q) +
                            " outside the quasi-identifier alphabet");
    }
    for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
      mass[static_cast<std::size_t>(s)] += dist.cell(q, s);
    }
  }
  return mass;
}

std::int32_t support_size(std::span<const double> mass, double p) {
  std::int32_t n = 0;
  for (double v : mass) {
    if (v >= p - kTieTolerance) ++n;
  }
  return n;
}

std::vector<SensitiveAttr> support_set(const JointDistribution& dist,
                                       std::span<const QuasiId> cls, double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw ValidationError("support threshold must lie in (0, 1]");
  }
  const auto mass = class_mass(dist, cls);
  std::vector<SensitiveAttr> support;
  for (SensitiveAttr s = 0; s < dist.s_size(); ++s) {
    if (mass[static_cast<std::size_t>(s)] >= p - kTieTolerance) {
      support.push_back(s);
    }
  }
  return support;
}

CellSampler::CellSampler(const JointDistribution& dist)
    : s_size_(dist.s_size()) {
  cdf_.resize(dist.probs().size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf_.size(); ++i) {
    acc += dist.probs()[i];
    cdf_[i] = acc;
  }
}

Record CellSampler::draw(SplitMix64& rng) const {
  const double u = rng.next_unit();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cdf_.begin());
  if (idx >= cdf_.size()) idx = cdf_.size() - 1;  // guards u >= sum rounding
  return Record{static_cast<QuasiId>(idx / static_cast<std::size_t>(s_size_)),
                static_cast<SensitiveAttr>(
                    idx % static_cast<std::size_t>(s_size_))};
}

Dataset sample_dataset(const JointDistribution& dist, std::int64_t n,
                       std::uint64_t seed) {
  if (n < 0) throw ValidationError("sample count must be >= 0");
  Dataset out;
  out.q_size = dist.q_size();
  out.s_size = dist.s_size();
  out.records.reserve(static_cast<std::size_t>(n));
  const CellSampler sampler(dist);
  SplitMix64 rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    out.records.push_back(sampler.draw(rng));
  }
  return out;
}

}  // namespace divlink
