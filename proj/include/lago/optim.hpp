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

#ifndef LAGO_OPTIM_HPP
#define LAGO_OPTIM_HPP

#include <functional>

#include "lago/common.hpp"

namespace lago {

struct SimplexOptions {
  int max_evaluations = 200;
  /// Stop when the spread of simplex values drops below this (absolute + relative).
  double f_tolerance = 1e-10;
  /// Stop when the simplex diameter drops below this.
  double x_tolerance = 1e-8;
};

struct SimplexResult {
  Vector x;
  double value = kInf;
  int evaluations = 0;
};

/// Nelder-Mead minimization. Every trial point is passed through `project`
/// before evaluation, so the returned point is always feasible for it.
SimplexResult nelder_mead(const std::function<double(const Vector&)>& objective,
                          const std::function<Vector(const Vector&)>& project, const Vector& start,
                          const Vector& initial_step, const SimplexOptions& options = {});

}  // namespace lago

#endif  // LAGO_OPTIM_HPP
