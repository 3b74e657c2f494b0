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

#ifndef LAGO_LAGO_HPP
#define LAGO_LAGO_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "lago/acquisition.hpp"
#include "lago/common.hpp"
#include "lago/gradient_gp.hpp"
#include "lago/problems.hpp"
#include "lago/trust_region.hpp"

namespace lago {

/// LAGO proper, or one of its degenerate configurations: GradBO never proposes
/// local steps, BO additionally ignores gradients in the surrogate.
enum class Mode { Lago, GradBo, Bo };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct LagoConfig {
  Mode mode = Mode::Lago;
  /// Global candidate wins iff EI > gamma * I_t.
  double gamma = 1.0;
  /// Points closer than nu * lengthscale to the trust-region center are not
  /// assimilated into the surrogate.
  double nu = 0.1;
  /// Early stop needs this many consecutive global EI values below eps_terminate.
  int early_stop_window = 5;
  double eps_terminate = 1e-12;
  /// An accepted trust-region step shorter than this terminates the region.
  double eps_step = 1e-7;
  double eta = 5e-4;
  double sr1_r = 1e-8;
  /// Defaults: half the fitted lengthscale, and half the domain diagonal.
  std::optional<double> initial_radius;
  std::optional<double> max_radius;
  int refit_period = 10;
  /// Total evaluation units, initial design included.
  long budget = 0;
  /// Units per gradient; defaults to the problem's cost model.
  std::optional<int> gradient_cost;
  /// Initial design size; defaults to 5 d.
  std::optional<int> design_size;
  std::uint64_t seed = 0;
  /// Defaults to Matern72 for LAGO and Matern52 for the BO modes.
  std::optional<KernelFamily> family;
  double nugget = 1e-9;
  /// Condition number of the kernel matrix in every record (one eigendecomposition per step).
  bool track_condition = false;
  /// Reference multiplier used to flag would-be filter activations, so that
  /// runs with different nu can be aligned on the same event.
  double filter_probe_nu = 0.1;
  AcquisitionOptions acquisition;

  KernelFamily resolved_family() const;
  void validate() const;
};

enum class Choice { Global, Local, TrTerminatedGlobal };
std::string_view to_string(Choice choice);

struct IterationRecord {
  int iteration = 0;
  Choice choice = Choice::Global;
  double ei = 0.0;
  double local_improvement = 0.0;
  Vector x;
  double f = 0.0;
  double f_best = 0.0;
  /// Trust-region radius after the iteration.
  double delta = 0.0;
  double lengthscale = 0.0;
  double condition_number = 0.0;
  long cost = 0;
  bool accepted = false;
  int active_size = 0;
  int filter_removed = 0;
  /// Active points within filter_probe_nu * lengthscale of a new center at a re-filter.
  int probe_hits = 0;
  /// A rejected local trial was assimilated closer than nu * lengthscale to the center.
  bool close_rejected = false;
};

struct LagoState {
  std::vector<Observation> archive;
  /// Indices into `archive` conditioning the surrogate.
  std::vector<int> active;
  std::optional<TrustRegionState> tr;
  int center_index = -1;
  bool tr_terminated = false;
  double f_best = kInf;
  Vector x_best;
  int best_index = -1;
  EvaluationLedger ledger;
  int consecutive_low_ei = 0;
  double last_local_improvement = kInf;
  int iteration = 0;
  bool stopped_early = false;
  GradientGpModel model;
};

/// Evaluate the design, fit the surrogate, evaluate the surrogate-informed
/// candidate (LAGO only) and set up the trust region at the archive minimizer.
LagoState initialize(const Problem& problem, const LagoConfig& config,
                     const std::vector<Vector>& design);

/// Design of experiments used by `run` when none is supplied.
std::vector<Vector> default_design(const Problem& problem, const LagoConfig& config);

enum class Proposal { Global, Local };
Proposal select(double ei_value, double local_improvement, double gamma);

/// Keeps `center_index` and every active point strictly farther than nu * lengthscale
/// from the center.
std::vector<int> apply_lengthscale_filter(const std::vector<Observation>& archive,
                                          const std::vector<int>& active, int center_index,
                                          double lengthscale, double nu);

/// One iteration: exactly one evaluation of the objective.
IterationRecord step(LagoState& state, const Problem& problem, const LagoConfig& config);

bool check_early_stop(const LagoState& state, const LagoConfig& config);

struct RunResult {
  Vector x_best;
  double f_best = kInf;
  std::vector<IterationRecord> trace;
  long units = 0;
  long init_units = 0;
  int init_evaluations = 0;
  bool stopped_early = false;
  /// (units after evaluation, f) for every evaluation including initialization.
  std::vector<std::pair<long, double>> evaluations;
  /// Points of the initial evaluations, in order.
  std::vector<Vector> init_points;
};

RunResult run(const Problem& problem, const LagoConfig& config);
RunResult run(const Problem& problem, const LagoConfig& config,
              const std::vector<Vector>& design);

}  // namespace lago

#endif  // LAGO_LAGO_HPP
