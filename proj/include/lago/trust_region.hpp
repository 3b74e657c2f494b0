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

#ifndef LAGO_TRUST_REGION_HPP
#define LAGO_TRUST_REGION_HPP

#include "lago/common.hpp"

namespace lago {

struct TrustRegionState {
  Vector center;
  double radius = 1.0;
  double max_radius = 1.0;
  /// Symmetric, possibly indefinite.
  Matrix hessian;
  double f_center = 0.0;
  Vector grad_center;
};

/// f_center + grad_center . s + s^T H s / 2
double quadratic_model(const TrustRegionState& state, const Vector& s);

struct SubproblemSolution {
  Vector step;
  /// m(0) - m(step), never negative.
  double model_decrease = 0.0;
  /// Lagrange multiplier of the norm constraint.
  double multiplier = 0.0;
  bool hard_case = false;
};

/// Global minimizer of g.s + s^T H s / 2 over |s| <= radius, computed from the
/// eigendecomposition of H (Moré-Sorensen characterization). In the hard case
/// the null-direction component is oriented so that its first nonzero
/// coordinate is positive.
SubproblemSolution solve_subproblem(const Vector& grad, const Matrix& hessian, double radius);

struct Sr1Result {
  Matrix hessian;
  bool updated = false;
};

/// Symmetric rank-one update, skipped unless |(y - Hs).s| >= r |s| |y - Hs|.
Sr1Result sr1_update(const Matrix& hessian, const Vector& s, const Vector& y, double r);

/// Actual over predicted decrease. A vanishing prediction (< 1e-14 in
/// magnitude) yields +/- infinity according to the sign of the actual decrease.
double improvement_ratio(double f_old, double f_trial, double model_decrease);

struct TrStepOutcome {
  bool accepted = false;
  TrustRegionState new_state;
  Vector trial_point;
  double rho = 0.0;
  double step_norm = 0.0;
  bool hessian_updated = false;
};

/// One accept/reject, radius and SR1 step given the evaluated trial point
/// state.center + s. The Hessian update uses the trial gradient whether or not
/// the step is accepted.
TrStepOutcome tr_step(const TrustRegionState& state, double f_trial, const Vector& grad_trial,
                      const Vector& s, double model_decrease, double eta, double r,
                      double max_radius);

}  // namespace lago

#endif  // LAGO_TRUST_REGION_HPP
