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

#include "lago/kernels.hpp"

#include <cmath>
#include <string>

namespace lago {

namespace {

void check_args(const Vector& x, const Vector& xp, const KernelHyper& hyper) {
  hyper.validate();
  if (x.size() != xp.size()) {
    throw InputError("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(xp.size()) + ")");
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::Matern52 ? "matern52" : "matern72";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "matern52") return KernelFamily::Matern52;
  if (name == "matern72") return KernelFamily::Matern72;
  throw InputError("unknown kernel family: " + std::string(name));
}

void KernelHyper::validate() const {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw InputError("kernel lengthscale must be positive and finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("kernel scale must be positive and finite");
  }
}

RadialProfile radial_profile(double r, const KernelHyper& hyper, KernelFamily family) {
  RadialProfile p;
  const double s2 = hyper.scale;
  if (family == KernelFamily::Matern72) {
    // u = sqrt(7) r / l, k = s2 (1 + u + 2u^2/5 + u^3/15) e^-u
    const double a = std::sqrt(7.0) / hyper.lengthscale;
    const double a2 = a * a;
    const double u = a * r;
    const double e = std::exp(-u);
    p.k = s2 * (1.0 + u + u * u * (0.4 + u / 15.0)) * e;
    p.f1 = -s2 * a2 / 15.0 * (3.0 + 3.0 * u + u * u) * e;
    p.f2 = s2 * a2 * a2 / 15.0 * (1.0 + u) * e;
    p.f3 = -s2 * a2 * a2 * a2 / 15.0 * e;
  } else {
    // u = sqrt(5) r / l, k = s2 (1 + u + u^2/3) e^-u
    const double a = std::sqrt(5.0) / hyper.lengthscale;
    const double a2 = a * a;
    const double u = a * r;
    const double e = std::exp(-u);
    p.k = s2 * (1.0 + u + u * u / 3.0) * e;
    p.f1 = -s2 * a2 / 3.0 * (1.0 + u) * e;
    p.f2 = s2 * a2 * a2 / 3.0 * e;
    p.f3 = std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

double kernel_value(const Vector& x, const Vector& xp, const KernelHyper& hyper,
                    KernelFamily family) {
  check_args(x, xp, hyper);
  return radial_profile((x - xp).norm(), hyper, family).k;
}

Matrix kernel_joint_block(const Vector& x, const Vector& xp, const KernelHyper& hyper,
                          KernelFamily family) {
  check_args(x, xp, hyper);
  const Eigen::Index d = x.size();
  const Vector delta = x - xp;
  const RadialProfile p = radial_profile(delta.norm(), hyper, family);

  Matrix block(d + 1, d + 1);
  block(0, 0) = p.k;
  block.block(1, 0, d, 1) = p.f1 * delta;
  block.block(0, 1, 1, d) = -p.f1 * delta.transpose();
  block.bottomRightCorner(d, d) = -p.f2 * delta * delta.transpose();
  block.bottomRightCorner(d, d).diagonal().array() -= p.f1;
  return block;
}

std::vector<Matrix> kernel_hessian_row(const Vector& x, const Vector& xp,
                                       const KernelHyper& hyper, KernelFamily family) {
  check_args(x, xp, hyper);
  if (family != KernelFamily::Matern72) {
    throw UnsupportedSmoothnessError(
        "kernel_hessian_row needs third derivatives; use matern72");
  }
  const Eigen::Index d = x.size();
  const Vector delta = x - xp;
  const RadialProfile p = radial_profile(delta.norm(), hyper, family);

  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d + 1));
  Matrix hk = p.f2 * delta * delta.transpose();
  hk.diagonal().array() += p.f1;
  out.push_back(std::move(hk));

  // d2/dx_i dx_j of (-f1 delta_m) = -[f3 di dj dm + f2 (I_ij dm + I_jm di + I_im dj)]
  for (Eigen::Index m = 0; m < d; ++m) {
    Matrix t = -p.f3 * delta[m] * delta * delta.transpose();
    t.diagonal().array() -= p.f2 * delta[m];
    t.row(m) -= p.f2 * delta.transpose();
    t.col(m) -= p.f2 * delta;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace lago
