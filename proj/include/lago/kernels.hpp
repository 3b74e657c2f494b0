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

#ifndef LAGO_KERNELS_HPP
#define LAGO_KERNELS_HPP

#include <string_view>
#include <vector>

#include "lago/common.hpp"

namespace lago {

enum class KernelFamily { Matern52, Matern72 };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Isotropic lengthscale and output variance of a stationary kernel.
struct KernelHyper {
  double lengthscale = 1.0;
  double scale = 1.0;

  void validate() const;
};

/// Radial profile of a Matérn kernel and its reduced derivatives.
///
/// With r = |x - x'| and k(r) the kernel, the derivative blocks are built from
///   f1 = k'(r) / r,  f2 = f1'(r) / r,  f3 = f2'(r) / r,
/// all of which extend continuously to r = 0 (f3 only for Matern72).
struct RadialProfile {
  double k = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

RadialProfile radial_profile(double r, const KernelHyper& hyper, KernelFamily family);

double kernel_value(const Vector& x, const Vector& xp, const KernelHyper& hyper,
                    KernelFamily family);

/// (d+1)x(d+1) covariance of [f(x), grad f(x)] with [f(x'), grad f(x')]:
///   [[k, (d/dx' k)^T], [d/dx k, d/dx d/dx'^T k]].
Matrix kernel_joint_block(const Vector& x, const Vector& xp, const KernelHyper& hyper,
                          KernelFamily family);

/// Second derivatives in x of the first row of the joint block. Element 0 is the
/// Hessian of k(x, x'); element m+1 is the Hessian of d k(x, x') / d x'_m.
/// Only available for Matern72.
std::vector<Matrix> kernel_hessian_row(const Vector& x, const Vector& xp,
                                       const KernelHyper& hyper, KernelFamily family);

}  // namespace lago

#endif  // LAGO_KERNELS_HPP
