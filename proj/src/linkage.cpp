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

#include "divlink/linkage.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>

#include "divlink/errors.hpp"

namespace divlink {
namespace {

constexpr std::int32_t kMaxBruteForceAlphabet = 12;
constexpr std::int32_t kMaxBruteForceLinkages = 4;
constexpr std::int64_t kBruteForceWorkCap = 150'000'000;

void check_worst_case_params(std::int32_t ell, std::int32_t s_size,
                             std::int32_t t) {
  if (s_size < 3) {
    throw ValidationError("worst-case analysis needs |S| >= 3, got " +
                          std::to_string(s_size));
  }
  if (t < 2 || t > s_size - 1) {
    throw ValidationError("number of linked datasets must lie in [2, |S|-1]");
  }
  if (ell < 1 || ell > s_size) {
    throw ValidationError("ell must lie in [1, |S|], got " +
                          std::to_string(ell));
  }
}

// All bitmasks over `bits` positions with exactly `weight` ones, ascending.
std::vector<std::uint32_t> weight_masks(std::int32_t bits, std::int32_t weight) {
  std::vector<std::uint32_t> masks;
  if (weight == 0) {
    masks.push_back(0);
    return masks;
  }
  std::uint32_t m = (std::uint32_t{1} << weight) - 1;
  const std::uint32_t limit = std::uint32_t{1} << bits;
  while (m < limit) {
    masks.push_back(m);
    // Gosper's hack: next mask of equal popcount.
    const std::uint32_t c = m & (~m + 1);
    const std::uint32_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return masks;
}

}  // namespace

std::int32_t CharacteristicVector::weight() const {
  std::int32_t w = 0;
  for (std::uint8_t b : bits) w += (b != 0);
  return w;
}

LinkageResult link(std::span<const AnonymizedDataset> anons, QuasiId q) {
  if (anons.size() < 2) {
    throw ValidationError("linkage needs at least 2 anonymized datasets");
  }
  const std::int32_t s_size = anons[0].s_size;
  for (const auto& anon : anons) {
    if (anon.s_size != s_size || anon.partition.q_size != anons[0].partition.q_size) {
      throw ValidationError("linked datasets must share their alphabets");
    }
  }

  LinkageResult result;
  result.per_attr_count.assign(static_cast<std::size_t>(s_size), 0);
  bool first = true;
  for (const auto& anon : anons) {
    const auto lookup = anon.partition.class_lookup();
    if (q < 0 || q >= anon.partition.q_size ||
        lookup[static_cast<std::size_t>(q)] < 0) {
      throw ValidationError("quasi-identifier " + std::to_string(q) +
                            " is not covered by every dataset's partition");
    }
    const std::int32_t c = lookup[static_cast<std::size_t>(q)];
    const auto& row = anon.counts[static_cast<std::size_t>(c)];
    const auto& members = anon.partition.classes[static_cast<std::size_t>(c)];
    EquivalenceClass sorted_members(members);
    std::sort(sorted_members.begin(), sorted_members.end());
    if (first) {
      result.per_attr_count = row;
      result.class_intersection = std::move(sorted_members);
      first = false;
    } else {
      for (std::int32_t s = 0; s < s_size; ++s) {
        result.per_attr_count[static_cast<std::size_t>(s)] =
            std::min(result.per_attr_count[static_cast<std::size_t>(s)],
                     row[static_cast<std::size_t>(s)]);
      }
      EquivalenceClass merged;
      std::set_intersection(result.class_intersection.begin(),
                            result.class_intersection.end(),
                            sorted_members.begin(), sorted_members.end(),
                            std::back_inserter(merged));
      result.class_intersection = std::move(merged);
    }
  }
  return result;
}

AnonymizedDataset link_all(std::span<const AnonymizedDataset> anons) {
  if (anons.size() < 2) {
    throw ValidationError("linkage needs at least 2 anonymized datasets");
  }
  const std::int32_t q_size = anons[0].partition.q_size;
  const std::int32_t s_size = anons[0].s_size;
  std::vector<std::vector<std::int32_t>> lookups;
  lookups.reserve(anons.size());
  for (const auto& anon : anons) {
    if (anon.partition.q_size != q_size || anon.s_size != s_size) {
      throw ValidationError("linked datasets must share their alphabets");
    }
    lookups.push_back(anon.partition.class_lookup());
  }

  AnonymizedDataset out;
  out.partition.q_size = q_size;
  out.s_size = s_size;

  // Quasi-identifiers with the same class in every dataset share one linkage;
  // group them and compute each group's minimum counts once.
  std::map<std::vector<std::int32_t>, std::size_t> group_index;
  std::vector<std::vector<std::int32_t>> group_keys;
  for (QuasiId q = 0; q < q_size; ++q) {
    std::vector<std::int32_t> key(anons.size());
    for (std::size_t j = 0; j < anons.size(); ++j) {
      key[j] = lookups[j][static_cast<std::size_t>(q)];
      if (key[j] < 0) {
        throw ValidationError("quasi-identifier " + std::to_string(q) +
                              " is not covered by every dataset's partition");
      }
    }
    auto [it, inserted] = group_index.try_emplace(key, group_keys.size());
    if (inserted) {
      group_keys.push_back(key);
      out.partition.classes.emplace_back();
    }
    out.partition.classes[it->second].push_back(q);
  }

  std::vector<EquivalenceClass> kept_classes;
  std::vector<std::vector<std::int64_t>> kept_counts;
  for (std::size_t g = 0; g < group_keys.size(); ++g) {
    std::vector<std::int64_t> row =
        anons[0].counts[static_cast<std::size_t>(group_keys[g][0])];
    for (std::size_t j = 1; j < anons.size(); ++j) {
      const auto& other =
          anons[j].counts[static_cast<std::size_t>(group_keys[g][j])];
      for (std::int32_t s = 0; s < s_size; ++s) {
        row[static_cast<std::size_t>(s)] =
            std::min(row[static_cast<std::size_t>(s)],
                     other[static_cast<std::size_t>(s)]);
      }
    }
    const bool surviving =
        std::any_of(row.begin(), row.end(), [](std::int64_t c) { return c > 0; });
    if (surviving) {
      kept_classes.push_back(std::move(out.partition.classes[g]));
      kept_counts.push_back(std::move(row));
    }
  }
  out.partition.classes = std::move(kept_classes);
  out.counts = std::move(kept_counts);
  return out;
}

std::int32_t worst_case_post_linkage_diversity(std::int32_t ell,
                                               std::int32_t s_size,
                                               std::int32_t t) {
  check_worst_case_params(ell, s_size, t);
  const std::int32_t big_l = s_size - 1;
  if (big_l % t != 0) {
    throw ValidationError(
        "closed form requires t to divide |S|-1; use the brute-force oracle");
  }
  if (static_cast<std::int64_t>(ell - 1) * t <=
      static_cast<std::int64_t>(big_l) * (t - 1)) {
    return 1;
  }
  return big_l + 1 - (big_l - ell + 1) * t;
}

std::vector<CharacteristicVector> adversarial_construction(std::int32_t ell,
                                                           std::int32_t s_size,
                                                           std::int32_t t) {
  check_worst_case_params(ell, s_size, t);
  const std::int32_t big_l = s_size - 1;
  if (big_l % t != 0) {
    throw ValidationError(
        "adversarial construction requires t to divide |S|-1");
  }
  std::vector<CharacteristicVector> vectors(static_cast<std::size_t>(t));
  for (std::int32_t j = 1; j <= t; ++j) {
    auto& vec = vectors[static_cast<std::size_t>(j - 1)];
    vec.bits.assign(static_cast<std::size_t>(s_size), 0);
    vec.bits[0] = 1;  // the shared attribute
    // Block of ell-1 ones starting at offset (j-1)L/t, wrapping circularly
    // over the remaining L coordinates.
    const std::int32_t base = (j - 1) * big_l / t;
    for (std::int32_t r = base + 1; r <= base + ell - 1; ++r) {
      const std::int32_t pos = (r - 1) % big_l;  // 0-based within [0, L)
      vec.bits[static_cast<std::size_t>(1 + pos)] = 1;
    }
  }
  return vectors;
}

std::int32_t brute_force_worst_case(std::int32_t ell, std::int32_t s_size,
                                    std::int32_t t, Exec exec) {
  check_worst_case_params(ell, s_size, t);
  if (s_size > kMaxBruteForceAlphabet || t > kMaxBruteForceLinkages) {
    throw SizeGuardError("brute-force enumeration is limited to |S| <= " +
                         std::to_string(kMaxBruteForceAlphabet) +
                         " and t <= " +
                         std::to_string(kMaxBruteForceLinkages));
  }
  const std::int32_t big_l = s_size - 1;
  const auto masks = weight_masks(big_l, ell - 1);
  const auto n_masks = static_cast<std::int64_t>(masks.size());

  // All vectors share coordinate 0; the remaining coordinates of the first
  // vector can be fixed canonically, since relabeling them permutes tuples
  // without changing intersection weights. That leaves t-1 free vectors.
  std::int64_t total = 1;
  for (std::int32_t j = 0; j < t - 1; ++j) {
    if (total > kBruteForceWorkCap / n_masks) {
      throw SizeGuardError("brute-force enumeration would exceed the work cap");
    }
    total *= n_masks;
  }
  const std::uint32_t first = masks.empty() ? 0 : masks.front();

  std::int32_t best = s_size;
#pragma omp parallel for reduction(min : best) schedule(static) \
    if (exec == Exec::kParallel)
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::uint32_t acc = first;
    std::int64_t rest = flat;
    for (std::int32_t j = 0; j < t - 1; ++j) {
      acc &= masks[static_cast<std::size_t>(rest % n_masks)];
      rest /= n_masks;
    }
    const std::int32_t w = std::popcount(acc) + 1;  // +1: shared coordinate
    best = std::min(best, w);
  }
  return best;
}

std::vector<AnonymizedDataset> realize_datasets(
    std::span<const CharacteristicVector> vectors) {
  std::vector<AnonymizedDataset> out;
  out.reserve(vectors.size());
  for (const auto& vec : vectors) {
    AnonymizedDataset anon;
    anon.partition = Partition::single_class(1);
    anon.s_size = static_cast<std::int32_t>(vec.bits.size());
    anon.counts.assign(1, std::vector<std::int64_t>(vec.bits.size(), 0));
    for (std::size_t s = 0; s < vec.bits.size(); ++s) {
      anon.counts[0][s] = vec.bits[s] ? 1 : 0;
    }
    out.push_back(std::move(anon));
  }
  return out;
}

}  // namespace divlink
