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

#include "lago/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lago/optim.hpp"

namespace lago {

double expected_improvement(double mean, double std, double f_best) {
  if (std::isnan(mean) || std::isnan(f_best) || !(std >= 0.0)) {
    throw InputError("expected_improvement: invalid arguments");
  }
  const double z = f_best - mean;
  if (!(std >= 1e-12)) return std::max(z, 0.0);
  const double u = z / std;
  const double cdf = 0.5 * std::erfc(-u / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(z * cdf + std * pdf, 0.0);
}

double farthest_distance(const Box& box, const Vector& center) {
  const Vector far = (center - box.lower).cwiseAbs().cwiseMax((box.upper - center).cwiseAbs());
  return far.norm();
}

namespace {

Vector farthest_corner(const Box& box, const Vector& center) {
  Vector corner(box.dim());
  for (Eigen::Index i = 0; i < corner.size(); ++i) {
    corner[i] = (center[i] - box.lower[i] >= box.upper[i] - center[i]) ? box.lower[i]
                                                                        : box.upper[i];
  }
  return corner;
}

constexpr double kTinyEi = 1e-300;

bool outside(const Vector& x, const AcquisitionContext& ctx) {
  return (x - ctx.exclusion_center).norm() >= ctx.exclusion_radius;
}

}  // namespace

Vector project_feasible(const Vector& x, const AcquisitionContext& ctx) {
  Vector p = ctx.domain.clip(x);
  if (ctx.exclusion_radius <= 0.0 || outside(p, ctx)) return p;

  for (int attempt = 0; attempt < 20; ++attempt) {
    Vector dir = p - ctx.exclusion_center;
    double norm = dir.norm();
    if (norm == 0.0) {
      dir = farthest_corner(ctx.domain, ctx.exclusion_center) - ctx.exclusion_center;
      norm = dir.norm();
    }
    double factor = ctx.exclusion_radius / norm;
    Vector q = ctx.exclusion_center + factor * dir;
    // Round-off can leave q a hair inside the sphere.
    while ((q - ctx.exclusion_center).norm() < ctx.exclusion_radius) {
      factor *= 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
      q = ctx.exclusion_center + factor * dir;
    }
    p = ctx.domain.clip(q);
    if (outside(p, ctx)) return p;
  }
  return farthest_corner(ctx.domain, ctx.exclusion_center);
}

AcquisitionResult maximize_outside_ball(const GradientGpModel& model,
                                        const AcquisitionContext& ctx, std::uint64_t seed,
                                        const AcquisitionOptions& options) {
  if (ctx.exclusion_radius < 0.0) throw InputError("exclusion radius must be nonnegative");
  if (((ctx.domain.upper - ctx.domain.lower).array() <= 0.0).any()) {
    throw InputError("acquisition domain is degenerate");
  }
  if (ctx.exclusion_radius > 0.0 &&
      farthest_distance(ctx.domain, ctx.exclusion_center) < ctx.exclusion_radius) {
    throw InfeasibleExclusionError("exclusion ball covers the whole domain");
  }

  // The simplex works on log EI: raw EI spans hundreds of decades and its
  // plateaus stall the spread-based stopping rule.
  auto neg_ei = [&](const Vector& x) {
    const PosteriorQuery q = model.posterior(x);
    return -std::log(std::max(expected_improvement(q.mean, q.stddev(), ctx.f_best), kTinyEi));
  };
  auto project = [&](const Vector& x) { return project_feasible(x, ctx); };

  Rng rng(seed);
  const Vector step = 0.05 * (ctx.domain.upper - ctx.domain.lower);
  SimplexOptions opts;
  opts.max_evaluations = options.max_evaluations_per_start;
  opts.f_tolerance = 1e-12;
  opts.x_tolerance = 1e-9 * ctx.domain.diagonal();

  // Starts: the best points of a uniform pool plus the box corners.
  std::vector<std::pair<double, Vector>> pool;
  const int pool_size = std::max(options.starts, options.pool_size);
  for (int i = 0; i < pool_size; ++i) {
    const Vector x = project(rng.uniform_in(ctx.domain));
    pool.emplace_back(neg_ei(x), x);
  }
  const Eigen::Index d = ctx.domain.dim();
  if (d <= 10) {
    for (long mask = 0; mask < (1L << d); ++mask) {
      Vector x(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        x[i] = (mask >> i) & 1 ? ctx.domain.upper[i] : ctx.domain.lower[i];
      }
      x = project(x);
      pool.emplace_back(neg_ei(x), x);
    }
  }
  const auto n_starts = static_cast<std::size_t>(std::min<int>(options.starts, static_cast<int>(pool.size())));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<long>(n_starts), pool.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  AcquisitionResult best{pool.front().second, std::exp(-pool.front().first)};
  for (std::size_t s = 0; s < n_starts; ++s) {
    const SimplexResult r = nelder_mead(neg_ei, project, pool[s].second, step, opts);
    const double ei = std::exp(-r.value);
    if (ei > best.ei) best = {r.x, ei};
  }
  const PosteriorQuery q = model.posterior(best.x);
  best.ei = expected_improvement(q.mean, q.stddev(), ctx.f_best);
  return best;
}

}  // namespace lago
