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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace divlink {

// Sample-size curve generation: sweeps one of delta, p, or ell and emits one
// CSV with a column of N values per curve. The threshold is p = beta * p_ell
// except in the p sweep, where p itself is the swept variable.
struct ExperimentSpec {
  enum class Family { kUniform, kGeometric };
  enum class Sweep { kDelta, kP, kEll };

  Family family = Family::kUniform;
  std::int32_t s_alphabet = 50;
  std::int32_t q_alphabet = 3000;
  double rho = 0.95;  // geometric family only

  std::vector<double> beta;   // curve parameter (delta and ell sweeps)
  std::vector<double> delta;  // swept (log-spaced grid) or curve parameter
  std::vector<std::int32_t> ell;

  Sweep sweep = Sweep::kDelta;
  // Grid for the p sweep; p_max <= 0 means "up to p_ell".
  double p_min = 1e-3;
  double p_max = 0.0;
  std::int32_t p_points = 50;
};

ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct CurveTable {
  std::string file_name;              // e.g. "uniform_sweep_delta.csv"
  std::vector<std::string> header;    // sweep variable, then one curve per col
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

// Evaluates the sample-size formula over the requested grid.
CurveTable run_experiment(const ExperimentSpec& spec);

// Runs the experiment and writes its CSV into out_dir; returns the file path.
std::filesystem::path write_experiment(const ExperimentSpec& spec,
                                       const std::filesystem::path& out_dir);

}  // namespace divlink
