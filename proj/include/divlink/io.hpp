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

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "divlink/core.hpp"
#include "divlink/distribution.hpp"
#include "divlink/mechanism.hpp"
#include "divlink/simulation.hpp"

namespace divlink::io {

inline constexpr int kFormatVersion = 1;

// ---- Distribution files -------------------------------------------------
//
// JSON document with `q_labels` and `s_labels` arrays plus exactly one of:
//   "probs":     flat row-major |Q|x|S| array of cell probabilities
//   "product":   {"q_marginal": [...], "s_marginal": [...]}
//   "uniform":   {}                      (uniform P_Q and P_S)
//   "geometric": {"rho": r}              (uniform P_Q, geometric P_S)
JointDistribution distribution_from_json(const nlohmann::json& doc);
JointDistribution load_distribution(const std::filesystem::path& path);

// ---- Partition files ----------------------------------------------------
//
// {"format_version": 1, "classes": [[qid, ...], ...]}
Partition partition_from_json(const nlohmann::json& doc, std::int32_t q_size);
Partition load_partition(const std::filesystem::path& path, std::int32_t q_size);

// ---- Mechanism plans ----------------------------------------------------
nlohmann::json plan_to_json(const MechanismPlan& plan);
MechanismPlan plan_from_json(const nlohmann::json& doc);
MechanismPlan load_plan(const std::filesystem::path& path);
void save_plan(const MechanismPlan& plan, const std::filesystem::path& path);

// ---- Trial reports ------------------------------------------------------
nlohmann::json trial_report_to_json(const TrialReport& report);
// One row per trial of the histogrammed min distinct-attribute count.
std::string trial_histogram_csv(const TrialReport& report);

// ---- Dataset CSV ingestion ----------------------------------------------
//
// Header row names the quasi-identifier columns, the final column is the
// sensitive attribute. Values are plain tokens (no quoting).
struct LabeledDataset {
  std::vector<std::string> q_columns;
  std::string s_column;
  // Row = (quasi-identifier tuple, sensitive value).
  std::vector<std::pair<std::vector<std::string>, std::string>> rows;
};

LabeledDataset read_csv(const std::filesystem::path& path);
void write_csv(const LabeledDataset& data, const std::filesystem::path& path);

// Lexicographic flattening map from label tuples to dense indices. Built over
// the union of one or more labeled datasets so they share an index space.
struct AlphabetMap {
  std::vector<std::vector<std::string>> q_labels;  // index -> tuple
  std::vector<std::string> s_labels;

  nlohmann::json to_json() const;
};

std::pair<std::vector<Dataset>, AlphabetMap> index_datasets(
    std::span<const LabeledDataset> inputs);

}  // namespace divlink::io
