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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "divlink/core.hpp"
#include "divlink/errors.hpp"
#include "divlink/experiment.hpp"
#include "divlink/generalization.hpp"
#include "divlink/io.hpp"
#include "divlink/linkage.hpp"
#include "divlink/mechanism.hpp"
#include "divlink/simulation.hpp"

namespace {

using namespace divlink;

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot write " + out_path);
  out << text;
}

void add_check_diversity(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "check-diversity", "Exact diversity of a CSV dataset under a partition");
  auto dataset_path = std::make_shared<std::string>();
  auto partition_path = std::make_shared<std::string>();
  auto mapping_out = std::make_shared<std::string>();
  cmd->add_option("dataset", *dataset_path, "dataset CSV")->required();
  cmd->add_option("partition", *partition_path, "partition JSON")->required();
  cmd->add_option("--mapping-out", *mapping_out,
                  "write the label-to-index mapping JSON here");
  cmd->callback([=]() {
    const auto labeled = io::read_csv(*dataset_path);
    auto [datasets, map] = io::index_datasets({&labeled, 1});
    const auto partition =
        io::load_partition(*partition_path, datasets[0].q_size);
    const auto anon = anonymize(datasets[0], partition);
    if (!mapping_out->empty()) {
      std::ofstream out(*mapping_out);
      if (!out) throw ValidationError("cannot write " + *mapping_out);
      out << map.to_json().dump(2) << '\n';
    }
    std::cout << diversity(anon) << '\n';
  });
}

void add_worst_case(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "worst-case", "Worst-case post-linkage diversity of ell-diverse inputs");
  auto ell = std::make_shared<std::int32_t>(0);
  auto s_size = std::make_shared<std::int32_t>(0);
  auto t = std::make_shared<std::int32_t>(0);
  auto brute = std::make_shared<bool>(false);
  auto vectors = std::make_shared<bool>(false);
  auto serial = std::make_shared<bool>(false);
  cmd->add_option("--ell", *ell, "diversity of each input")->required();
  cmd->add_option("--s-alphabet", *s_size, "sensitive alphabet size")
      ->required();
  cmd->add_option("--t", *t, "number of linked datasets")->required();
  cmd->add_flag("--brute-force", *brute,
                "use the exhaustive oracle (works when t does not divide "
                "|S|-1; checked against the closed form when it does)");
  cmd->add_flag("--vectors", *vectors, "also print the adversarial vectors");
  cmd->add_flag("--serial", *serial, "disable parallel enumeration");
  cmd->callback([=]() {
    std::int32_t value;
    if (*brute) {
      value = brute_force_worst_case(*ell, *s_size, *t,
                                     *serial ? Exec::kSerial : Exec::kParallel);
      if ((*s_size - 1) % *t == 0 &&
          value != worst_case_post_linkage_diversity(*ell, *s_size, *t)) {
        throw std::logic_error("oracle disagrees with the closed form");
      }
    } else {
      value = worst_case_post_linkage_diversity(*ell, *s_size, *t);
    }
    std::cout << value << '\n';
    if (*vectors) {
      for (const auto& vec : adversarial_construction(*ell, *s_size, *t)) {
        std::string line;
        for (std::uint8_t b : vec.bits) line += b ? '1' : '0';
        std::cout << line << '\n';
      }
    }
  });
}

void add_plan(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "plan", "Build a mechanism plan (partition, bound, sample size)");
  auto dist_path = std::make_shared<std::string>();
  auto ell = std::make_shared<std::int32_t>(0);
  auto delta = std::make_shared<double>(0.0);
  auto p = std::make_shared<double>(0.0);
  auto beta = std::make_shared<double>(0.0);
  auto strategy = std::make_shared<std::string>("greedy");
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--dist", *dist_path, "distribution JSON")->required();
  cmd->add_option("--ell", *ell, "diversity target")->required();
  cmd->add_option("--delta", *delta, "failure budget")->required();
  auto* p_opt = cmd->add_option("--p", *p, "mass threshold");
  auto* beta_opt =
      cmd->add_option("--beta", *beta, "threshold as a fraction of p_ell");
  p_opt->excludes(beta_opt);
  cmd->add_option("--strategy", *strategy, "greedy | ind | trivial")
      ->check(CLI::IsMember({"greedy", "ind", "trivial"}));
  cmd->add_option("--out", *out_path, "output path (default: stdout)");
  cmd->callback([=]() {
    if (p_opt->count() == 0 && beta_opt->count() == 0) {
      throw ValidationError("one of --p or --beta is required");
    }
    const auto dist = io::load_distribution(*dist_path);
    double threshold = *p;
    if (beta_opt->count() > 0) {
      if (!(*beta > 0.0) || !(*beta <= 1.0)) {
        throw ValidationError("beta must lie in (0, 1]");
      }
      threshold = *beta * p_ell(summarize(dist), *ell);
    }
    Strategy s = Strategy::kGreedy;
    if (*strategy == "ind") s = Strategy::kInd;
    if (*strategy == "trivial") s = Strategy::kTrivial;
    const auto result = plan(dist, *ell, *delta, threshold, s);
    write_or_print(io::plan_to_json(result).dump(2) + "\n", *out_path);
  });
}

void add_simulate(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "simulate", "Monte Carlo check of the plan's diversity guarantee");
  auto plan_path = std::make_shared<std::string>();
  auto dist_path = std::make_shared<std::string>();
  auto t = std::make_shared<std::int32_t>(1);
  auto trials = std::make_shared<std::int64_t>(10000);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out_path = std::make_shared<std::string>();
  auto hist_path = std::make_shared<std::string>();
  auto serial = std::make_shared<bool>(false);
  cmd->add_option("--plan", *plan_path, "plan JSON")->required();
  cmd->add_option("--dist", *dist_path, "distribution JSON")->required();
  cmd->add_option("--t", *t, "number of linked data owners (1 = no linkage)");
  cmd->add_option("--trials", *trials, "number of Monte Carlo trials");
  cmd->add_option("--seed", *seed, "base seed (required for reproducibility)")
      ->required();
  cmd->add_option("--out", *out_path, "report path (default: stdout)");
  cmd->add_option("--histogram-csv", *hist_path,
                  "also write the per-trial histogram as CSV");
  cmd->add_flag("--serial", *serial, "disable parallel trials");
  cmd->callback([=]() {
    const auto mech_plan = io::load_plan(*plan_path);
    const auto dist = io::load_distribution(*dist_path);
    const Exec exec = *serial ? Exec::kSerial : Exec::kParallel;
    const TrialReport report =
        *t == 1 ? simulate_single(mech_plan, dist, *trials, *seed, exec)
                : simulate_linkage(mech_plan, dist, *t, *trials, *seed, exec);
    write_or_print(io::trial_report_to_json(report).dump(2) + "\n", *out_path);
    if (!hist_path->empty()) {
      write_or_print(io::trial_histogram_csv(report), *hist_path);
    }
  });
}

void add_experiment(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "experiment", "Emit sample-size curves for a sweep specification");
  auto spec_path = std::make_shared<std::string>();
  auto out_dir = std::make_shared<std::string>();
  cmd->add_option("--spec", *spec_path, "experiment spec JSON")->required();
  cmd->add_option("--out", *out_dir, "output directory")->required();
  cmd->callback([=]() {
    const auto spec = load_experiment_spec(*spec_path);
    const auto path = write_experiment(spec, *out_dir);
    std::cout << path.string() << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "divlink: plan, apply, and verify probabilistic diversity "
      "anonymization, and quantify its degradation under linkage"};
  app.require_subcommand(1);
  add_check_diversity(app);
  add_worst_case(app);
  add_plan(app);
  add_simulate(app);
  add_experiment(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << '\n';
    return kExitSizeGuard;
  }
  return kExitOk;
}
