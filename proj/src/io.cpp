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

#include "divlink/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "divlink/errors.hpp"

namespace divlink::io {
namespace {

nlohmann::json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void check_format_version(const nlohmann::json& doc, const char* what) {
  if (doc.contains("format_version") &&
      doc.at("format_version").get<int>() != kFormatVersion) {
    throw ValidationError(std::string(what) + ": unsupported format_version");
  }
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

JointDistribution distribution_from_json(const nlohmann::json& doc) {
  check_format_version(doc, "distribution");
  if (!doc.contains("q_labels") || !doc.contains("s_labels")) {
    throw ValidationError("distribution needs q_labels and s_labels arrays");
  }
  const auto q_size =
      static_cast<std::int32_t>(doc.at("q_labels").size());
  const auto s_size =
      static_cast<std::int32_t>(doc.at("s_labels").size());
  const int source_count = doc.contains("probs") + doc.contains("product") +
                           doc.contains("uniform") + doc.contains("geometric");
  if (source_count != 1) {
    throw ValidationError(
        "distribution needs exactly one of probs, product, uniform, geometric");
  }

  if (doc.contains("probs")) {
    auto probs = doc.at("probs").get<std::vector<double>>();
    return JointDistribution(q_size, s_size, std::move(probs));
  }
  if (doc.contains("product")) {
    const auto& prod = doc.at("product");
    auto qm = prod.at("q_marginal").get<std::vector<double>>();
    auto sm = prod.at("s_marginal").get<std::vector<double>>();
    if (qm.size() != static_cast<std::size_t>(q_size) ||
        sm.size() != static_cast<std::size_t>(s_size)) {
      throw ValidationError("product marginals must match the label counts");
    }
    return JointDistribution::product(std::move(qm), std::move(sm));
  }
  if (doc.contains("uniform")) {
    return JointDistribution::uniform(q_size, s_size);
  }
  const double rho = doc.at("geometric").at("rho").get<double>();
  return JointDistribution::geometric(q_size, s_size, rho);
}

JointDistribution load_distribution(const std::filesystem::path& path) {
  return distribution_from_json(parse_file(path));
}

Partition partition_from_json(const nlohmann::json& doc, std::int32_t q_size) {
  check_format_version(doc, "partition");
  Partition partition;
  partition.q_size = q_size;
  for (const auto& cls : doc.at("classes")) {
    partition.classes.push_back(cls.get<EquivalenceClass>());
  }
  if (auto violation = validate_partition(partition, q_size)) {
    throw ValidationError("invalid partition: " + violation->message);
  }
  return partition;
}

Partition load_partition(const std::filesystem::path& path,
                         std::int32_t q_size) {
  return partition_from_json(parse_file(path), q_size);
}

nlohmann::json plan_to_json(const MechanismPlan& plan) {
  nlohmann::json doc;
  doc["format_version"] = kFormatVersion;
  doc["ell"] = plan.ell;
  doc["delta"] = plan.delta;
  doc["p"] = plan.p;
  doc["m_bound"] = plan.m_bound;
  doc["sample_size"] = plan.sample_size;
  doc["q_size"] = plan.partition.q_size;
  doc["classes"] = plan.partition.classes;
  return doc;
}

MechanismPlan plan_from_json(const nlohmann::json& doc) {
  check_format_version(doc, "plan");
  MechanismPlan plan;
  plan.ell = doc.at("ell").get<std::int32_t>();
  plan.delta = doc.at("delta").get<double>();
  plan.p = doc.at("p").get<double>();
  plan.m_bound = doc.at("m_bound").get<double>();
  plan.sample_size = doc.at("sample_size").get<std::int64_t>();
  plan.partition.q_size = doc.at("q_size").get<std::int32_t>();
  for (const auto& cls : doc.at("classes")) {
    plan.partition.classes.push_back(cls.get<EquivalenceClass>());
  }
  if (auto violation =
          validate_partition(plan.partition, plan.partition.q_size)) {
    throw ValidationError("invalid plan partition: " + violation->message);
  }
  return plan;
}

MechanismPlan load_plan(const std::filesystem::path& path) {
  return plan_from_json(parse_file(path));
}

void save_plan(const MechanismPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << plan_to_json(plan).dump(2) << '\n';
}

nlohmann::json trial_report_to_json(const TrialReport& report) {
  nlohmann::json doc;
  doc["format_version"] = kFormatVersion;
  doc["trials"] = report.trials;
  doc["failures"] = report.failures;
  doc["empirical_rate"] = report.empirical_rate;
  doc["bound"] = report.bound;
  doc["seed"] = report.seed;
  doc["histogram"] = report.histogram;
  return doc;
}

std::string trial_histogram_csv(const TrialReport& report) {
  std::string out = "min_distinct,trials\n";
  for (std::size_t v = 0; v < report.histogram.size(); ++v) {
    out += std::to_string(v) + "," + std::to_string(report.histogram[v]) + "\n";
  }
  return out;
}

LabeledDataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());

  LabeledDataset data;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 2) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": header needs at least one quasi-identifier "
                              "column and one sensitive column");
      }
      data.s_column = fields.back();
      fields.pop_back();
      data.q_columns = std::move(fields);
      continue;
    }
    if (fields.size() != data.q_columns.size() + 1) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected " +
                            std::to_string(data.q_columns.size() + 1) +
                            " fields, got " + std::to_string(fields.size()));
    }
    std::string sens = std::move(fields.back());
    fields.pop_back();
    data.rows.emplace_back(std::move(fields), std::move(sens));
  }
  if (data.q_columns.empty()) {
    throw ValidationError(path.string() + ": empty file");
  }
  return data;
}

void write_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const auto& col : data.q_columns) out << col << ',';
  out << data.s_column << '\n';
  for (const auto& [qid, sens] : data.rows) {
    for (const auto& v : qid) out << v << ',';
    out << sens << '\n';
  }
}

nlohmann::json AlphabetMap::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = kFormatVersion;
  doc["q_labels"] = q_labels;
  doc["s_labels"] = s_labels;
  return doc;
}

std::pair<std::vector<Dataset>, AlphabetMap> index_datasets(
    std::span<const LabeledDataset> inputs) {
  if (inputs.empty()) {
    throw ValidationError("need at least one dataset to index");
  }
  // Union alphabets over all inputs, in lexicographic order of the labels.
  std::map<std::vector<std::string>, QuasiId> q_index;
  std::map<std::string, SensitiveAttr> s_index;
  for (const auto& input : inputs) {
    if (input.q_columns.size() != inputs[0].q_columns.size()) {
      throw ValidationError(
          "datasets disagree on the number of quasi-identifier columns");
    }
    for (const auto& [qid, sens] : input.rows) {
      q_index.emplace(qid, 0);
      s_index.emplace(sens, 0);
    }
  }
  AlphabetMap map;
  for (auto& [labels, idx] : q_index) {
    idx = static_cast<QuasiId>(map.q_labels.size());
    map.q_labels.push_back(labels);
  }
  for (auto& [label, idx] : s_index) {
    idx = static_cast<SensitiveAttr>(map.s_labels.size());
    map.s_labels.push_back(label);
  }

  std::vector<Dataset> datasets;
  datasets.reserve(inputs.size());
  for (const auto& input : inputs) {
    Dataset d;
    d.q_size = static_cast<std::int32_t>(map.q_labels.size());
    d.s_size = static_cast<std::int32_t>(map.s_labels.size());
    d.records.reserve(input.rows.size());
    for (const auto& [qid, sens] : input.rows) {
      d.records.push_back(Record{q_index.at(qid), s_index.at(sens)});
    }
    datasets.push_back(std::move(d));
  }
  return {std::move(datasets), std::move(map)};
}

}  // namespace divlink::io
