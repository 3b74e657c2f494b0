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

#include "lago/lago.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lago/optim.hpp"

namespace lago {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Lago: return "lago";
    case Mode::GradBo: return "gradbo";
    case Mode::Bo: return "bo";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  if (name == "lago" || name == "LAGO") return Mode::Lago;
  if (name == "gradbo" || name == "GradBO") return Mode::GradBo;
  if (name == "bo" || name == "BO") return Mode::Bo;
  throw ConfigError("unknown mode: " + std::string(name) + " (expected lago, gradbo or bo)");
}

std::string_view to_string(Choice choice) {
  switch (choice) {
    case Choice::Global: return "global";
    case Choice::Local: return "local";
    case Choice::TrTerminatedGlobal: return "tr-terminated-global";
  }
  return "?";
}

KernelFamily LagoConfig::resolved_family() const {
  if (family) return *family;
  return mode == Mode::Lago ? KernelFamily::Matern72 : KernelFamily::Matern52;
}

void LagoConfig::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(nu >= 0.0)) throw ConfigError("nu must be nonnegative");
  if (early_stop_window < 1) throw ConfigError("early-stop window must be positive");
  if (!(eps_terminate > 0.0) || !(eps_step > 0.0)) throw ConfigError("thresholds must be positive");
  if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (!(sr1_r > 0.0)) throw ConfigError("sr1 r must be positive");
  if (refit_period < 1) throw ConfigError("refit period must be positive");
  if (budget < 1) throw ConfigError("budget must be positive");
  if (gradient_cost && *gradient_cost < 0) throw ConfigError("gradient cost must be >= 0");
  if (design_size && *design_size < 1) throw ConfigError("design size must be positive");
  if (initial_radius && !(*initial_radius > 0.0)) throw ConfigError("initial radius must be > 0");
  if (max_radius && !(*max_radius > 0.0)) throw ConfigError("max radius must be > 0");
  if (mode == Mode::Lago && resolved_family() != KernelFamily::Matern72) {
    throw ConfigError("LAGO needs the matern72 kernel for the posterior-mean Hessian");
  }
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1) + 0xbf58476d1ce4e5b9ULL * counter;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum SeedTag : std::uint64_t { kFitTag = 1, kAcqTag = 2, kInformedTag = 3 };

int evaluate_into(LagoState& state, const Problem& problem, const Vector& x) {
  Evaluation e = problem.evaluate(x);
  if (!std::isfinite(e.f) || !e.grad.allFinite()) {
    throw NumericalError("objective returned non-finite values");
  }
  state.ledger.charge(x);
  const int idx = static_cast<int>(state.archive.size());
  state.archive.push_back({x, e.f, std::move(e.grad), idx});
  if (e.f < state.f_best) {
    state.f_best = e.f;
    state.x_best = x;
    state.best_index = idx;
  }
  return idx;
}

std::vector<Observation> active_observations(const LagoState& state) {
  std::vector<Observation> obs;
  obs.reserve(state.active.size());
  for (int i : state.active) obs.push_back(state.archive[static_cast<std::size_t>(i)]);
  return obs;
}

// Rebuild the posterior on the active set. If the kernel matrix cannot be
// factorized, the newest non-center points are dropped from the active set
// (they remain archived).
void recondition(LagoState& state) {
  for (;;) {
    try {
      state.model = state.model.condition(active_observations(state));
      return;
    } catch (const IllConditionedError&) {
      auto it = std::find_if(state.active.rbegin(), state.active.rend(),
                             [&](int i) { return i != state.center_index; });
      if (it == state.active.rend() || state.active.size() <= 1) throw;
      state.active.erase(std::next(it).base());
    }
  }
}

void refit(LagoState& state, const LagoConfig& config) {
  const HyperFit fit = state.model.fit_hyperparameters(
      mix_seed(config.seed, kFitTag, static_cast<std::uint64_t>(state.iteration)));
  if (!fit.success) return;
  try {
    state.model = state.model.with_hyper(fit.hyper);
  } catch (const IllConditionedError&) {
    // keep the previous hyperparameters
  }
}

double max_radius_of(const Problem& problem, const LagoConfig& config) {
  return config.max_radius.value_or(0.5 * problem.domain.diagonal());
}

double reset_radius(const LagoState& state, double max_radius) {
  return std::min(0.5 * state.model.hyper().lengthscale, max_radius);
}

struct FilterStats {
  int removed = 0;
  int probe_hits = 0;
};

FilterStats refilter(LagoState& state, const LagoConfig& config) {
  const double ell = state.model.hyper().lengthscale;
  const Vector& c = state.archive[static_cast<std::size_t>(state.center_index)].x;
  FilterStats stats;
  for (int i : state.active) {
    if (i == state.center_index) continue;
    if ((state.archive[static_cast<std::size_t>(i)].x - c).norm() <= config.filter_probe_nu * ell) {
      ++stats.probe_hits;
    }
  }
  std::vector<int> kept =
      apply_lengthscale_filter(state.archive, state.active, state.center_index, ell, config.nu);
  stats.removed = static_cast<int>(state.active.size() - kept.size());
  state.active = std::move(kept);
  return stats;
}

// Move the trust region to archive entry `idx` with a fresh radius and the
// surrogate Hessian, then re-filter around it.
FilterStats relocate(LagoState& state, const Problem& problem, const LagoConfig& config,
                     int idx) {
  const Observation& obs = state.archive[static_cast<std::size_t>(idx)];
  TrustRegionState tr;
  tr.center = obs.x;
  tr.f_center = obs.f;
  tr.grad_center = obs.grad;
  tr.max_radius = max_radius_of(problem, config);
  tr.radius = reset_radius(state, tr.max_radius);
  tr.hessian = *state.model.posterior(obs.x, false, true).mean_hessian;
  state.tr = std::move(tr);
  state.center_index = idx;
  state.tr_terminated = false;
  FilterStats stats = refilter(state, config);
  if (stats.removed > 0) recondition(state);
  return stats;
}

}  // namespace

std::vector<Vector> default_design(const Problem& problem, const LagoConfig& config) {
  const int n = config.design_size.value_or(5 * problem.dim);
  return latin_hypercube(problem.domain, n, config.seed);
}

LagoState initialize(const Problem& problem, const LagoConfig& config,
                     const std::vector<Vector>& design) {
  config.validate();
  if (design.empty()) throw ConfigError("initial design is empty");
  const int gradient_cost = config.gradient_cost.value_or(problem.gradient_cost);
  const long per_eval = 1 + gradient_cost;
  const long init_evals = static_cast<long>(design.size()) + (config.mode == Mode::Lago ? 1 : 0);
  if (init_evals * per_eval > config.budget) {
    throw ConfigError("budget " + std::to_string(config.budget) +
                      " is smaller than the initialization cost " +
                      std::to_string(init_evals * per_eval));
  }

  GpSettings settings;
  settings.family = config.resolved_family();
  settings.nugget = config.nugget;
  settings.use_gradients = config.mode != Mode::Bo;

  LagoState state{.ledger = EvaluationLedger(gradient_cost),
                  .model = GradientGpModel(settings, KernelHyper{}, 0.0, problem.domain)};

  for (const Vector& x : design) {
    if (x.size() != problem.dim) throw ConfigError("design point has the wrong dimension");
    evaluate_into(state, problem, x);
  }

  double mean_f = 0.0;
  for (const auto& o : state.archive) mean_f += o.f;
  mean_f /= static_cast<double>(state.archive.size());
  double var_f = 0.0;
  for (const auto& o : state.archive) var_f += (o.f - mean_f) * (o.f - mean_f);
  var_f /= static_cast<double>(state.archive.size());
  if (!(var_f > 0.0)) var_f = 1.0;

  state.model = GradientGpModel(settings,
                                KernelHyper{0.2 * problem.domain.diagonal(), var_f}, mean_f,
                                problem.domain);
  for (int i = 0; i < static_cast<int>(state.archive.size()); ++i) state.active.push_back(i);
  recondition(state);
  refit(state, config);

  if (config.mode != Mode::Lago) return state;

  // Surrogate-informed first candidate: minimizer of the posterior mean.
  {
    auto mean = [&](const Vector& x) { return state.model.posterior(x).mean; };
    auto project = [&](const Vector& x) { return problem.domain.clip(x); };
    Rng rng(mix_seed(config.seed, kInformedTag, 0));
    const Vector step = 0.05 * (problem.domain.upper - problem.domain.lower);
    SimplexOptions opts;
    opts.max_evaluations = config.acquisition.max_evaluations_per_start;
    opts.f_tolerance = 1e-12;
    opts.x_tolerance = 1e-9 * problem.domain.diagonal();
    SimplexResult best = nelder_mead(mean, project, state.x_best, step, opts);
    for (int s = 1; s < config.acquisition.starts; ++s) {
      SimplexResult r = nelder_mead(mean, project, rng.uniform_in(problem.domain), step, opts);
      if (r.value < best.value) best = std::move(r);
    }
    evaluate_into(state, problem, best.x);
    state.active.push_back(static_cast<int>(state.archive.size()) - 1);
    recondition(state);
  }

  TrustRegionState tr;
  const Observation& c = state.archive[static_cast<std::size_t>(state.best_index)];
  tr.center = c.x;
  tr.f_center = c.f;
  tr.grad_center = c.grad;
  tr.max_radius = max_radius_of(problem, config);
  tr.radius = std::min(config.initial_radius.value_or(0.5 * state.model.hyper().lengthscale),
                       tr.max_radius);
  tr.hessian = *state.model.posterior(c.x, false, true).mean_hessian;
  state.tr = std::move(tr);
  state.center_index = state.best_index;
  return state;
}

Proposal select(double ei_value, double local_improvement, double gamma) {
  return ei_value > gamma * local_improvement ? Proposal::Global : Proposal::Local;
}

std::vector<int> apply_lengthscale_filter(const std::vector<Observation>& archive,
                                          const std::vector<int>& active, int center_index,
                                          double lengthscale, double nu) {
  if (center_index < 0 || center_index >= static_cast<int>(archive.size())) {
    throw InputError("filter center is not in the archive");
  }
  const Vector& c = archive[static_cast<std::size_t>(center_index)].x;
  const double threshold = nu * lengthscale;
  std::vector<int> kept;
  kept.reserve(active.size());
  bool has_center = false;
  for (int i : active) {
    if (i == center_index) {
      has_center = true;
      kept.push_back(i);
    } else if ((archive[static_cast<std::size_t>(i)].x - c).norm() > threshold) {
      kept.push_back(i);
    }
  }
  if (!has_center) kept.push_back(center_index);
  return kept;
}

bool check_early_stop(const LagoState& state, const LagoConfig& config) {
  // The baselines spend their whole budget.
  if (config.mode != Mode::Lago) return false;
  return state.consecutive_low_ei >= config.early_stop_window &&
         state.last_local_improvement < config.eps_terminate;
}

IterationRecord step(LagoState& state, const Problem& problem, const LagoConfig& config) {
  ++state.iteration;
  if (state.iteration % config.refit_period == 0) refit(state, config);

  IterationRecord rec;
  rec.iteration = state.iteration;
  const std::uint64_t acq_seed =
      mix_seed(config.seed, kAcqTag, static_cast<std::uint64_t>(state.iteration));
  const double ell = state.model.hyper().lengthscale;

  AcquisitionContext ctx;
  ctx.f_best = state.f_best;
  ctx.domain = problem.domain;

  auto track_ei = [&](double ei) {
    state.consecutive_low_ei = ei < config.eps_terminate ? state.consecutive_low_ei + 1 : 0;
    rec.ei = ei;
  };

  // Evaluate a global candidate; relocate the trust region on a new incumbent.
  auto take_global = [&](const Vector& x) {
    const double previous_best = state.f_best;
    const int idx = evaluate_into(state, problem, x);
    state.active.push_back(idx);
    recondition(state);
    if (state.tr && state.archive[static_cast<std::size_t>(idx)].f < previous_best) {
      const FilterStats fs = relocate(state, problem, config, idx);
      rec.filter_removed = fs.removed;
      rec.probe_hits = fs.probe_hits;
    }
    return idx;
  };

  if (!state.tr) {
    ctx.exclusion_center = state.x_best;
    ctx.exclusion_radius = 0.0;
    const AcquisitionResult g = maximize_outside_ball(state.model, ctx, acq_seed, config.acquisition);
    track_ei(g.ei);
    state.last_local_improvement = 0.0;
    rec.choice = Choice::Global;
    take_global(g.x);
  } else {
    TrustRegionState& tr = *state.tr;
    bool terminated = state.tr_terminated;
    if (terminated) tr.radius = reset_radius(state, tr.max_radius);

    ctx.exclusion_center = tr.center;
    ctx.exclusion_radius = tr.radius;
    AcquisitionResult g;
    try {
      g = maximize_outside_ball(state.model, ctx, acq_seed, config.acquisition);
    } catch (const InfeasibleExclusionError&) {
      // The region covers the domain: handle as a terminated region.
      terminated = true;
      tr.radius = reset_radius(state, tr.max_radius);
      ctx.exclusion_radius = tr.radius;
      if (farthest_distance(ctx.domain, ctx.exclusion_center) < ctx.exclusion_radius) {
        ctx.exclusion_radius = 0.0;
      }
      g = maximize_outside_ball(state.model, ctx, acq_seed, config.acquisition);
    }
    track_ei(g.ei);

    if (terminated) {
      state.tr_terminated = false;
      rec.choice = Choice::TrTerminatedGlobal;
      take_global(g.x);
    } else {
      const SubproblemSolution sub = solve_subproblem(tr.grad_center, tr.hessian, tr.radius);
      const double local_improvement = sub.model_decrease;
      state.last_local_improvement = local_improvement;
      rec.local_improvement = local_improvement;

      if (select(g.ei, local_improvement, config.gamma) == Proposal::Global) {
        rec.choice = Choice::Global;
        take_global(g.x);
      } else {
        rec.choice = Choice::Local;
        const Vector x_local = tr.center + sub.step;
        const int idx = evaluate_into(state, problem, x_local);
        const Observation& obs = state.archive[static_cast<std::size_t>(idx)];
        TrStepOutcome out = tr_step(tr, obs.f, obs.grad, sub.step, sub.model_decrease, config.eta,
                                    config.sr1_r, tr.max_radius);
        rec.accepted = out.accepted;
        state.tr = std::move(out.new_state);
        state.active.push_back(idx);
        if (out.accepted) {
          state.center_index = idx;
          const FilterStats fs = refilter(state, config);
          rec.filter_removed = fs.removed;
          rec.probe_hits = fs.probe_hits;
          if (out.step_norm <= config.eps_step) state.tr_terminated = true;
        } else {
          rec.close_rejected = (x_local - state.tr->center).norm() <= config.nu * ell;
        }
        recondition(state);
      }
    }
  }

  const Observation& last = state.archive.back();
  rec.x = last.x;
  rec.f = last.f;
  rec.f_best = state.f_best;
  rec.delta = state.tr ? state.tr->radius : 0.0;
  rec.lengthscale = state.model.hyper().lengthscale;
  rec.condition_number = config.track_condition ? state.model.condition_number()
                                                : std::numeric_limits<double>::quiet_NaN();
  rec.cost = state.ledger.units();
  rec.active_size = static_cast<int>(state.active.size());
  return rec;
}

RunResult run(const Problem& problem, const LagoConfig& config) {
  return run(problem, config, default_design(problem, config));
}

RunResult run(const Problem& problem, const LagoConfig& config,
              const std::vector<Vector>& design) {
  LagoState state = initialize(problem, config, design);
  RunResult result;
  result.init_units = state.ledger.units();
  result.init_evaluations = static_cast<int>(state.archive.size());
  for (const auto& obs : state.archive) result.init_points.push_back(obs.x);
  const long per_eval = state.ledger.units_per_evaluation();
  while (state.ledger.units() + per_eval <= config.budget) {
    result.trace.push_back(step(state, problem, config));
    if (check_early_stop(state, config)) {
      state.stopped_early = true;
      break;
    }
  }
  result.x_best = state.x_best;
  result.f_best = state.f_best;
  result.units = state.ledger.units();
  result.stopped_early = state.stopped_early;
  long units = 0;
  for (std::size_t i = 0; i < state.archive.size(); ++i) {
    units += state.ledger.entries()[i].cost;
    result.evaluations.emplace_back(units, state.archive[i].f);
  }
  return result;
}

}  // namespace lago
