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
#include "divlink/exec.hpp"

namespace divlink {

// Indicator of which sensitive attributes appear in an equivalence class.
struct CharacteristicVector {
  std::vector<std::uint8_t> bits;  // length |S|, 0/1

  std::int32_t weight() const;
};

// Result of linking t anonymized datasets at one quasi-identifier: the
// per-attribute minimum counts plus the intersection of the matched classes.
struct LinkageResult {
  std::vector<std::int64_t> per_attr_count;  // min over datasets, per attribute
  EquivalenceClass class_intersection;       // sorted
};

// The adversary's linkage at quasi-identifier q: locate the class containing
// q in each dataset and take per-attribute minimum counts. Requires >= 2
// datasets over matching alphabets, each covering q.
LinkageResult link(std::span<const AnonymizedDataset> anons, QuasiId q);

// Post-linkage dataset over all quasi-identifiers: classes are the distinct
// intersections of the matched classes, with per-attribute minimum counts.
// Intersections whose counts are all zero are dropped, so the returned
// partition need not cover the full alphabet.
AnonymizedDataset link_all(std::span<const AnonymizedDataset> anons);

// Worst-case diversity of the post-linkage dataset when t datasets, each of
// diversity ell over an |S|-letter sensitive alphabet, are linked. Closed
// form; requires t to divide |S|-1 and 2 <= t <= |S|-1.
std::int32_t worst_case_post_linkage_diversity(std::int32_t ell,
                                               std::int32_t s_size,
                                               std::int32_t t);

// Explicit characteristic vectors achieving the worst case: t vectors of
// weight ell sharing coordinate 0, whose supports intersect in exactly
// worst_case_post_linkage_diversity(ell, s_size, t) attributes.
std::vector<CharacteristicVector> adversarial_construction(std::int32_t ell,
                                                           std::int32_t s_size,
                                                           std::int32_t t);

// Exact minimum intersection-support weight over all t-tuples of weight-ell
// binary vectors sharing coordinate 0, by exhaustive enumeration (the first
// vector is fixed up to relabeling of the remaining coordinates). No
// divisibility requirement. Size-guarded: |S| <= 12, t <= 4, and the
// enumeration work must stay under an internal cap.
std::int32_t brute_force_worst_case(std::int32_t ell, std::int32_t s_size,
                                    std::int32_t t,
                                    Exec exec = Exec::kParallel);

// Converts characteristic vectors into minimal concrete anonymized datasets
// for end-to-end demonstrations: each becomes a single-class dataset over a
// one-letter quasi-identifier alphabet with count 1 per supported attribute.
std::vector<AnonymizedDataset> realize_datasets(
    std::span<const CharacteristicVector> vectors);

}  // namespace divlink
