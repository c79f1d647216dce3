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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "divlink/core.hpp"
#include "divlink/io.hpp"
#include "divlink/rng.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kBin = DIVLINK_BIN;
const fs::path kFixtures = DIVLINK_FIXTURES;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = kBin + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.output.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "divlink_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check-diversity prints the exact value") {
  const auto result =
      run_cli("check-diversity " + (kFixtures / "table1.csv").string() + " " +
              (kFixtures / "table1_partition.json").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output == "2\n");
}

TEST_CASE("check-diversity can emit the flattening map") {
  const auto dir = scratch_dir();
  const auto mapping = dir / "mapping.json";
  const auto result =
      run_cli("check-diversity " + (kFixtures / "table1.csv").string() + " " +
              (kFixtures / "table1_partition.json").string() +
              " --mapping-out " + mapping.string());
  CHECK(result.exit_code == 0);
  const auto doc = nlohmann::json::parse(slurp(mapping));
  CHECK(doc.at("q_labels").size() == 3);
  CHECK(doc.at("s_labels").size() == 4);
  fs::remove_all(dir);
}

TEST_CASE("check-diversity reports missing inputs as validation errors") {
  const auto result = run_cli("check-diversity /nonexistent.csv /nope.json");
  CHECK(result.exit_code == 2);
}

TEST_CASE("worst-case spot values and flags") {
  CHECK(run_cli("worst-case --ell 4 --s-alphabet 5 --t 2").output == "3\n");
  CHECK(run_cli("worst-case --ell 1 --s-alphabet 5 --t 2").output == "1\n");

  const auto closed = run_cli("worst-case --ell 6 --s-alphabet 7 --t 3");
  const auto brute =
      run_cli("worst-case --ell 6 --s-alphabet 7 --t 3 --brute-force");
  CHECK(closed.exit_code == 0);
  CHECK(closed.output == brute.output);

  const auto vectors =
      run_cli("worst-case --ell 3 --s-alphabet 5 --t 2 --vectors");
  CHECK(vectors.output == "1\n11100\n10011\n");

  // Closed form withheld when t does not divide |S|-1...
  CHECK(run_cli("worst-case --ell 3 --s-alphabet 6 --t 2").exit_code == 2);
  // ...but the oracle still answers.
  const auto oracle =
      run_cli("worst-case --ell 5 --s-alphabet 6 --t 2 --brute-force");
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.output == "4\n");

  CHECK(run_cli("worst-case --ell 4 --s-alphabet 13 --t 2 --brute-force")
            .exit_code == 4);
}

TEST_CASE("plan/simulate round trip is deterministic") {
  const auto dir = scratch_dir();
  const auto plan_path = dir / "plan.json";
  const auto dist = (kFixtures / "dist_uniform_8x4.json").string();

  const auto planned =
      run_cli("plan --dist " + dist +
              " --ell 2 --delta 0.05 --beta 0.25 --strategy greedy --out " +
              plan_path.string());
  REQUIRE(planned.exit_code == 0);
  const auto plan_doc = nlohmann::json::parse(slurp(plan_path));
  CHECK(plan_doc.at("classes").size() == 4);
  CHECK(plan_doc.at("sample_size").get<long long>() >= 1);

  const std::string simulate_args = "simulate --plan " + plan_path.string() +
                                    " --dist " + dist +
                                    " --trials 400 --seed 9";
  const auto a = run_cli(simulate_args);
  const auto b = run_cli(simulate_args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  const auto report = nlohmann::json::parse(a.output);
  CHECK(report.at("trials") == 400);
  CHECK(report.at("bound") == 0.05);

  const auto serial = run_cli(simulate_args + " --serial");
  CHECK(serial.output == a.output);

  const auto linked = run_cli(simulate_args + " --t 2");
  CHECK(nlohmann::json::parse(linked.output).at("bound") == 0.1);

  // An explicit seed is mandatory for randomized commands.
  CHECK(run_cli("simulate --plan " + plan_path.string() + " --dist " + dist +
                " --trials 10")
            .exit_code == 2);

  fs::remove_all(dir);
}

TEST_CASE("check-diversity matches the library on a randomized fixture") {
  const auto dir = scratch_dir();
  const auto csv_path = dir / "random.csv";
  const auto partition_path = dir / "random_partition.json";

  divlink::SplitMix64 rng(2468);
  {
    std::ofstream csv(csv_path);
    csv << "zone,kind\n";
    for (int i = 0; i < 60; ++i) {
      csv << "z" << rng.next() % 5 << ",k" << rng.next() % 4 << "\n";
    }
    std::ofstream part(partition_path);
    part << R"({"format_version": 1, "classes": [[0, 2], [1, 3, 4]]})";
  }

  const auto labeled = divlink::io::read_csv(csv_path);
  const auto [datasets, map] = divlink::io::index_datasets({&labeled, 1});
  const auto partition =
      divlink::io::load_partition(partition_path, datasets[0].q_size);
  const auto expected =
      divlink::diversity(divlink::anonymize(datasets[0], partition));

  const auto result = run_cli("check-diversity " + csv_path.string() + " " +
                              partition_path.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output == std::to_string(expected) + "\n");
  fs::remove_all(dir);
}

TEST_CASE("plan output is byte-identical across runs") {
  const auto dir = scratch_dir();
  const auto dist = (kFixtures / "dist_uniform_8x4.json").string();
  const std::string args = "plan --dist " + dist +
                           " --ell 2 --delta 0.05 --p 0.0625 --strategy ind";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(!a.output.empty());
  CHECK(a.output == b.output);
  fs::remove_all(dir);
}

TEST_CASE("plan rejects thresholds beyond p_ell") {
  const auto dist = (kFixtures / "dist_uniform_8x4.json").string();
  const auto result = run_cli("plan --dist " + dist +
                              " --ell 2 --delta 0.05 --p 0.5 --strategy greedy");
  CHECK(result.exit_code == 2);
}

TEST_CASE("experiment emits byte-identical curve files") {
  const auto dir = scratch_dir();
  const auto spec = (kFixtures / "experiment_uniform_delta.json").string();
  const auto first =
      run_cli("experiment --spec " + spec + " --out " + dir.string());
  REQUIRE(first.exit_code == 0);
  const auto csv_path = dir / "uniform_sweep_delta.csv";
  REQUIRE(fs::exists(csv_path));
  const auto once = slurp(csv_path);
  CHECK(run_cli("experiment --spec " + spec + " --out " + dir.string())
            .exit_code == 0);
  CHECK(slurp(csv_path) == once);
  CHECK(once.substr(0, 6) == "delta,");
  fs::remove_all(dir);
}
