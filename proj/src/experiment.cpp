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

#include "divlink/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "divlink/distribution.hpp"
#include "divlink/errors.hpp"
#include "divlink/mechanism.hpp"

namespace divlink {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> log_spaced(double lo, double hi, std::int32_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw ValidationError("sweep range needs 0 < min < max and >= 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (std::int32_t i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> real_grid(const nlohmann::json& node, const char* what) {
  if (node.is_array()) {
    auto values = node.get<std::vector<double>>();
    if (values.empty()) {
      throw ValidationError(std::string(what) + " list must be non-empty");
    }
    return values;
  }
  if (node.is_object()) {
    return log_spaced(node.at("min").get<double>(),
                      node.at("max").get<double>(),
                      node.value("points", 50));
  }
  throw ValidationError(std::string(what) + " must be a list or a range");
}

std::vector<std::int32_t> int_grid(const nlohmann::json& node,
                                   const char* what) {
  if (node.is_array()) {
    auto values = node.get<std::vector<std::int32_t>>();
    if (values.empty()) {
      throw ValidationError(std::string(what) + " list must be non-empty");
    }
    return values;
  }
  if (node.is_object()) {
    const auto lo = node.at("min").get<std::int32_t>();
    const auto hi = node.at("max").get<std::int32_t>();
    if (hi < lo) throw ValidationError(std::string(what) + " range is empty");
    std::vector<std::int32_t> values;
    for (std::int32_t v = lo; v <= hi; ++v) values.push_back(v);
    return values;
  }
  throw ValidationError(std::string(what) + " must be a list or a range");
}

std::int64_t curve_point(const DistributionSummary& summary, std::int32_t ell,
                         double p, double delta, std::int32_t q_size) {
  const double m = m_bound(summary, ell, p, q_size);
  return sample_size(m, ell, p, delta);
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const nlohmann::json& doc) {
  if (doc.contains("format_version") &&
      doc.at("format_version").get<int>() != 1) {
    throw ValidationError("experiment spec: unsupported format_version");
  }
  ExperimentSpec spec;
  const auto family = doc.at("family").get<std::string>();
  if (family == "uniform") {
    spec.family = ExperimentSpec::Family::kUniform;
  } else if (family == "geometric") {
    spec.family = ExperimentSpec::Family::kGeometric;
  } else {
    throw ValidationError("family must be uniform or geometric");
  }
  spec.s_alphabet = doc.value("s_alphabet", 50);
  spec.q_alphabet = doc.value("q_alphabet", 3000);
  spec.rho = doc.value("rho", 0.95);
  if (spec.s_alphabet < 1 || spec.q_alphabet < 1) {
    throw ValidationError("alphabet sizes must be positive");
  }

  const auto sweep = doc.at("sweep").get<std::string>();
  if (sweep == "delta") {
    spec.sweep = ExperimentSpec::Sweep::kDelta;
  } else if (sweep == "p") {
    spec.sweep = ExperimentSpec::Sweep::kP;
  } else if (sweep == "ell") {
    spec.sweep = ExperimentSpec::Sweep::kEll;
  } else {
    throw ValidationError("sweep must be delta, p, or ell");
  }

  if (doc.contains("beta")) {
    spec.beta = doc.at("beta").get<std::vector<double>>();
    for (double b : spec.beta) {
      if (!(b > 0.0) || b > 1.0) {
        throw ValidationError("beta values must lie in (0, 1]");
      }
    }
  }
  if (doc.contains("delta")) {
    spec.delta = real_grid(doc.at("delta"), "delta");
    for (double d : spec.delta) {
      if (!(d > 0.0) || !(d < 1.0)) {
        throw ValidationError("delta values must lie in (0, 1)");
      }
    }
  }
  if (doc.contains("ell")) {
    spec.ell = int_grid(doc.at("ell"), "ell");
    for (std::int32_t l : spec.ell) {
      if (l < 1 || l > spec.s_alphabet) {
        throw ValidationError("ell values must lie in [1, |S|]");
      }
    }
  }
  if (doc.contains("p")) {
    const auto& p = doc.at("p");
    spec.p_min = p.value("min", spec.p_min);
    spec.p_max = p.value("max", spec.p_max);
    spec.p_points = p.value("points", spec.p_points);
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return experiment_spec_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string CurveTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += (i ? "," : "") + header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + fmt(row[i]);
    }
    out += '\n';
  }
  return out;
}

CurveTable run_experiment(const ExperimentSpec& spec) {
  const bool uniform = spec.family == ExperimentSpec::Family::kUniform;
  const JointDistribution dist =
      uniform
          ? JointDistribution::uniform(spec.q_alphabet, spec.s_alphabet)
          : JointDistribution::geometric(spec.q_alphabet, spec.s_alphabet,
                                         spec.rho);
  const auto summary = summarize(dist);

  CurveTable table;
  const std::string family_name = uniform ? "uniform" : "geometric";

  switch (spec.sweep) {
    case ExperimentSpec::Sweep::kDelta: {
      if (spec.beta.empty() || spec.ell.empty() || spec.delta.empty()) {
        throw ValidationError("delta sweep needs beta, ell, and delta");
      }
      table.file_name = family_name + "_sweep_delta.csv";
      table.header.push_back("delta");
      for (double b : spec.beta) {
        for (std::int32_t l : spec.ell) {
          table.header.push_back("N[beta=" + fmt(b) + ",ell=" + fmt(l) + "]");
        }
      }
      for (double d : spec.delta) {
        std::vector<double> row{d};
        for (double b : spec.beta) {
          for (std::int32_t l : spec.ell) {
            const double p = b * p_ell(summary, l);
            row.push_back(static_cast<double>(
                curve_point(summary, l, p, d, spec.q_alphabet)));
          }
        }
        table.rows.push_back(std::move(row));
      }
      break;
    }
    case ExperimentSpec::Sweep::kP: {
      if (spec.delta.empty() || spec.ell.empty()) {
        throw ValidationError("p sweep needs delta and ell");
      }
      double p_max = spec.p_max;
      if (!(p_max > 0.0)) {
        p_max = p_ell(summary, *std::max_element(spec.ell.begin(),
                                                 spec.ell.end()));
      }
      const auto grid = log_spaced(spec.p_min, p_max, spec.p_points);
      table.file_name = family_name + "_sweep_p.csv";
      table.header.push_back("p");
      for (double d : spec.delta) {
        for (std::int32_t l : spec.ell) {
          table.header.push_back("N[delta=" + fmt(d) + ",ell=" + fmt(l) + "]");
        }
      }
      for (double p : grid) {
        std::vector<double> row{p};
        for (double d : spec.delta) {
          for (std::int32_t l : spec.ell) {
            row.push_back(static_cast<double>(
                curve_point(summary, l, p, d, spec.q_alphabet)));
          }
        }
        table.rows.push_back(std::move(row));
      }
      break;
    }
    case ExperimentSpec::Sweep::kEll: {
      if (spec.beta.empty() || spec.delta.empty() || spec.ell.empty()) {
        throw ValidationError("ell sweep needs beta, delta, and ell");
      }
      table.file_name = family_name + "_sweep_ell.csv";
      table.header.push_back("ell");
      for (double b : spec.beta) {
        for (double d : spec.delta) {
          table.header.push_back("N[beta=" + fmt(b) + ",delta=" + fmt(d) + "]");
        }
      }
      for (std::int32_t l : spec.ell) {
        std::vector<double> row{static_cast<double>(l)};
        for (double b : spec.beta) {
          for (double d : spec.delta) {
            const double p = b * p_ell(summary, l);
            row.push_back(static_cast<double>(
                curve_point(summary, l, p, d, spec.q_alphabet)));
          }
        }
        table.rows.push_back(std::move(row));
      }
      break;
    }
  }
  return table;
}

std::filesystem::path write_experiment(const ExperimentSpec& spec,
                                       const std::filesystem::path& out_dir) {
  const CurveTable table = run_experiment(spec);
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / table.file_name;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << table.to_csv();
  return path;
}

}  // namespace divlink
