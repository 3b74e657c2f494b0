// Copyright 2026 The LAGO Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <cstdio>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lago/experiment.hpp"

namespace {

struct Flags {
  std::string problem = "branin";
  int dim = 2;
  std::string mode = "lago";
  std::string seeds = "1-10";
  bool full = false;
  long budget = 0;
  double gamma = 1.0;
  double nu = 0.1;
  int gradient_cost = -1;
  int mesh_n = 50;
  std::string out;
  int workers = 1;
  std::string config_file;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--problem", f.problem, "Problem name (see list-problems)");
  app->add_option("--dim", f.dim, "Problem dimension");
  app->add_option("--mode", f.mode, "lago, gradbo or bo");
  app->add_option("--seeds", f.seeds, "Seed list, e.g. 1-10 or 1,4,7");
  app->add_flag("--full", f.full, "Use seeds 1-50");
  app->add_option("--budget", f.budget, "Evaluation units per run (default 210*dim)");
  app->add_option("--gamma", f.gamma, "EI weight in the selection rule");
  app->add_option("--nu", f.nu, "Lengthscale filter fraction");
  app->add_option("--gradient-cost", f.gradient_cost,
                  "Units charged per gradient (default: problem specific)");
  app->add_option("--mesh-n", f.mesh_n, "Mesh resolution for the PDE problem");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--workers", f.workers, "Seeds run concurrently");
  app->add_option("--config", f.config_file, "Key-value config file; flags given explicitly override it");
}

lago::CampaignConfig make_config(const CLI::App* app, const Flags& f) {
  lago::CampaignConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw lago::ConfigError("cannot read " + f.config_file);
    std::stringstream ss;
    ss << in.rdbuf();
    c = lago::CampaignConfig::parse(ss.str());
  }
  auto given = [&](const char* name) { return f.config_file.empty() || app->count(name) > 0; };
  if (given("--problem")) c.problem = f.problem;
  if (given("--dim")) c.dim = f.dim;
  if (given("--mode")) c.mode = lago::mode_from_string(f.mode);
  if (f.full) {
    c.seeds = lago::parse_seed_list("1-50");
  } else if (given("--seeds")) {
    c.seeds = lago::parse_seed_list(f.seeds);
  }
  if (given("--budget")) c.budget = f.budget;
  if (given("--gamma")) c.gamma = f.gamma;
  if (given("--nu")) c.nu = f.nu;
  if (app->count("--gradient-cost") > 0) c.gradient_cost = f.gradient_cost;
  if (given("--mesh-n")) c.mesh_n = f.mesh_n;
  if (given("--out")) c.out = f.out;
  if (given("--workers")) c.workers = f.workers;
  c.lago_config(1).validate();
  return c;
}

void print_row(const char* label, const lago::SummaryRow& r) {
  std::printf("%s median %.6e  q1 %.6e  q3 %.6e\n", label, r.median, r.q1, r.q3);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LAGO: gradient-enhanced Bayesian optimization with a local trust region"};
  app.require_subcommand(1);

  Flags flags;
  auto* run_cmd = app.add_subcommand("run", "Run a seeded campaign");
  add_common(run_cmd, flags);

  std::vector<double> gammas = {0.5, 1.0, 2.0, 5.0};
  auto* gamma_cmd = app.add_subcommand("ablate-gamma", "Final error for several gamma values");
  add_common(gamma_cmd, flags);
  gamma_cmd->add_option("--gammas", gammas, "Gamma values")->delimiter(',');

  int window = 3;
  auto* cond_cmd = app.add_subcommand("ablate-conditioning",
                                      "Condition number around the first filter activation");
  add_common(cond_cmd, flags);
  cond_cmd->add_option("--window", window, "Half width in iterations");

  int points = 10;
  std::uint64_t check_seed = 1;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare gradients with finite differences");
  grad_cmd->add_option("--problem", flags.problem, "Problem name");
  grad_cmd->add_option("--dim", flags.dim, "Problem dimension");
  grad_cmd->add_option("--mesh-n", flags.mesh_n, "Mesh resolution for the PDE problem");
  grad_cmd->add_option("--points", points, "Number of random points");
  grad_cmd->add_option("--seed", check_seed, "Seed for the points");

  auto* list_cmd = app.add_subcommand("list-problems", "List available problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& info : lago::problem_catalog()) {
        std::string dims;
        for (int d : info.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
        std::printf("%-18s dims %-10s %s\n", info.name.c_str(), dims.c_str(),
                    info.description.c_str());
      }
      return 0;
    }
    if (grad_cmd->parsed()) {
      lago::ProblemOptions opts;
      opts.mesh_n = flags.mesh_n;
      const lago::Problem p = lago::make_problem(flags.problem, flags.dim, opts);
      const double err = lago::gradient_check(p, points, check_seed);
      std::printf("%s d=%d max relative gradient error %.3e\n", p.name.c_str(), p.dim, err);
      return err < 1e-4 ? 0 : 1;
    }
    if (run_cmd->parsed()) {
      const lago::CampaignConfig c = make_config(run_cmd, flags);
      const lago::CampaignSummary s = lago::run_campaign(c);
      for (const auto& r : s.runs) {
        std::printf("seed %llu  f_best %.10g  units %ld%s\n",
                    static_cast<unsigned long long>(r.seed), r.result.f_best, r.result.units,
                    r.result.stopped_early ? "  (early stop)" : "");
      }
      print_row("final error", s.final_error);
      return 0;
    }
    if (gamma_cmd->parsed()) {
      lago::CampaignConfig c = make_config(gamma_cmd, flags);
      if (gamma_cmd->count("--problem") == 0 && flags.config_file.empty()) {
        c.problem = "levy";
      }
      for (const auto& row : lago::run_gamma_ablation(c, gammas)) {
        const std::string label = "gamma " + std::to_string(row.gamma);
        print_row(label.c_str(), row.final_error);
      }
      return 0;
    }
    if (cond_cmd->parsed()) {
      const lago::CampaignConfig c = make_config(cond_cmd, flags);
      const lago::ConditioningTable t = lago::run_conditioning_ablation(c, {0.1, 0.0}, window);
      if (t.used_seeds.empty()) {
        std::printf("no seed activated the filter inside a complete window (%d excluded)\n",
                    t.excluded);
        return 1;
      }
      std::printf("seeds used %zu, excluded %d\n", t.used_seeds.size(), t.excluded);
      std::fputs(lago::conditioning_csv(t).c_str(), stdout);
      return 0;
    }
  } catch (const lago::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
