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

#ifndef LAGO_EXPERIMENT_HPP
#define LAGO_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lago/lago.hpp"
#include "lago/problems.hpp"

namespace lago {

/// Everything needed to reproduce a multi-seed campaign. Serializes to a flat
/// `key = value` text file.
struct CampaignConfig {
  std::string problem = "branin";
  int dim = 2;
  Mode mode = Mode::Lago;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  /// Evaluation units; 0 means 210 d.
  long budget = 0;
  std::optional<int> gradient_cost;
  int mesh_n = 50;
  std::string out;
  int workers = 1;

  double gamma = 1.0;
  double nu = 0.1;
  int early_stop_window = 5;
  double eps_terminate = 1e-12;
  double eps_step = 1e-7;
  double eta = 5e-4;
  double sr1_r = 1e-8;
  std::optional<double> initial_radius;
  std::optional<double> max_radius;
  int refit_period = 10;
  double nugget = 1e-9;
  std::optional<KernelFamily> kernel;
  std::optional<int> design_size;
  /// Condition number of the kernel matrix in every record (one eigendecomposition per step).
  bool track_condition = false;

  long resolved_budget() const { return budget > 0 ? budget : 210L * dim; }
  LagoConfig lago_config(std::uint64_t seed) const;
  Problem make_problem() const;

  std::string to_text() const;
  static CampaignConfig parse(std::string_view text);
};

/// Seeds written as "1,2,5" or ranges "1-10".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Result of one seed: records plus the best-so-far curve sampled at every
/// evaluation unit (index u holds the best value after u units; NaN before the
/// first evaluation completes).
struct RunArtifact {
  std::uint64_t seed = 0;
  RunResult result;
  std::vector<double> best_curve;
};

std::vector<double> best_so_far_curve(const RunResult& result, long budget);

struct SummaryRow {
  long units = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct CampaignSummary {
  std::vector<RunArtifact> runs;
  /// Error statistics per evaluation unit; error is |best - known_min| when the
  /// minimum is known, otherwise the best value itself.
  std::vector<SummaryRow> rows;
  SummaryRow final_error;
};

/// Median and quartiles (linear interpolation between order statistics).
SummaryRow quartiles(std::vector<double> values);

/// The shared initial design used for a seed in every mode.
std::vector<Vector> campaign_design(const CampaignConfig& config, const Problem& problem,
                                    std::uint64_t seed);

CampaignSummary run_campaign(const CampaignConfig& config);

/// Trace CSV: initial evaluations as iteration 0, then one row per iteration.
std::string trace_csv(const RunArtifact& artifact, const Problem& problem);
std::string curve_csv(const RunArtifact& artifact, const Problem& problem);
std::string summary_csv(const CampaignSummary& summary);

/// Best-so-far curve recomputed from a trace CSV.
std::vector<double> replay_curve_from_trace(const std::string& trace_text, long budget);

void write_campaign(const CampaignConfig& config, const CampaignSummary& summary,
                    const std::filesystem::path& dir);

struct GammaRow {
  double gamma = 0.0;
  SummaryRow final_error;
};

std::vector<GammaRow> run_gamma_ablation(const CampaignConfig& base,
                                         const std::vector<double>& gammas);

struct ConditioningRow {
  double nu = 0.0;
  int offset = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  int count = 0;
};

struct ConditioningTable {
  std::vector<ConditioningRow> rows;
  std::vector<std::uint64_t> used_seeds;
  /// Seeds whose runs never activated the filter or ended inside the window.
  int excluded = 0;
};

/// Condition numbers around the first filter activation t*, normalized by the
/// value at t*, for each nu in `nus`. `window` is in iterations on each side.
ConditioningTable run_conditioning_ablation(const CampaignConfig& base,
                                            const std::vector<double>& nus = {0.1, 0.0},
                                            int window = 3);

std::string conditioning_csv(const ConditioningTable& table);

}  // namespace lago

#endif  // LAGO_EXPERIMENT_HPP
