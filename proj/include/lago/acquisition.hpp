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

#ifndef LAGO_ACQUISITION_HPP
#define LAGO_ACQUISITION_HPP

#include "lago/common.hpp"
#include "lago/gradient_gp.hpp"

namespace lago {

/// Thrown when the exclusion ball leaves no feasible point in the domain.
class InfeasibleExclusionError : public InputError {
 public:
  using InputError::InputError;
};

/// Expected improvement of a Gaussian N(mean, std^2) over `f_best` (minimization).
double expected_improvement(double mean, double std, double f_best);

struct AcquisitionContext {
  double f_best = 0.0;
  Vector exclusion_center;
  double exclusion_radius = 0.0;
  Box domain;
};

struct AcquisitionOptions {
  int starts = 32;
  /// Uniform candidates screened for the starting points.
  int pool_size = 512;
  int max_evaluations_per_start = 80;
};

struct AcquisitionResult {
  Vector x;
  double ei = 0.0;
};

/// Largest distance from `center` to any point of `box` (attained at a corner).
double farthest_distance(const Box& box, const Vector& center);

/// Map `x` into {x in box : |x - center| >= radius}.
Vector project_feasible(const Vector& x, const AcquisitionContext& ctx);

/// Multi-start simplex ascent of EI over the domain minus the open ball
/// B(exclusion_center, exclusion_radius).
AcquisitionResult maximize_outside_ball(const GradientGpModel& model,
                                        const AcquisitionContext& ctx, std::uint64_t seed,
                                        const AcquisitionOptions& options = {});

}  // namespace lago

#endif  // LAGO_ACQUISITION_HPP
