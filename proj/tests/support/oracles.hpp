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

// Independent reference computations shared by the unit and acceptance tests.

#ifndef LAGO_TESTS_ORACLES_HPP
#define LAGO_TESTS_ORACLES_HPP

#include <functional>

#include "lago/gradient_gp.hpp"
#include "lago/kernels.hpp"
#include "lago/pde_problem.hpp"

namespace oracle {

using lago::Matrix;
using lago::Vector;

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

/// |a - b| / max(|b|, floor), maximized over entries.
double max_rel_error(const Matrix& a, const Matrix& b, double floor);

struct BlockErrors {
  double first_order = 0.0;
  double second_order = 0.0;
};

/// Joint block versus central differences of kernel_value.
BlockErrors joint_block_fd_error(const Vector& x, const Vector& xp, const lago::KernelHyper& h,
                            lago::KernelFamily family);

/// Hessian row versus central differences of the joint block.
double hessian_row_fd_error(const Vector& x, const Vector& xp, const lago::KernelHyper& h,
                            lago::KernelFamily family);

struct DensePosterior {
  double mean = 0.0;
  double variance = 0.0;
  Vector mean_grad;
};

/// Posterior from an explicitly assembled covariance and a pivoted LU solve.
DensePosterior dense_posterior(const std::vector<lago::Observation>& data,
                               const lago::KernelHyper& hyper, lago::KernelFamily family,
                               double prior_mean, double nugget, const Vector& x);

struct MonteCarlo {
  double estimate = 0.0;
  double standard_error = 0.0;
};
MonteCarlo ei_monte_carlo(double mean, double std, double f_best, long samples,
                          std::uint64_t seed);

/// Smallest value of g.s + s^T H s / 2 over a polar grid of about `points`
/// points covering the disk of the given radius (d = 2).
double disk_grid_minimum(const Vector& g, const Matrix& H, double radius, long points);

/// Largest KKT residual of a trust-region subproblem solution.
double kkt_residual(const Vector& g, const Matrix& H, double radius, const Vector& s,
                    double multiplier);

/// P1 stiffness over interior vertices for kappa = 1, assembled densely from
/// reference-element gradients with vertex coordinates computed here.
Matrix reference_laplacian(int n);

}  // namespace oracle

#endif  // LAGO_TESTS_ORACLES_HPP
