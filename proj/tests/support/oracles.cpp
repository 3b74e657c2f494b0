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

#include "oracles.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace oracle {

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

double max_rel_error(const Matrix& a, const Matrix& b, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double e = std::abs(a(i, j) - b(i, j)) / std::max(std::abs(b(i, j)), floor);
      worst = std::max(worst, e);
    }
  }
  return worst;
}

BlockErrors joint_block_fd_error(const Vector& x, const Vector& xp, const lago::KernelHyper& h,
                            lago::KernelFamily family) {
  const Eigen::Index d = x.size();
  const double step = 1e-5 * h.lengthscale;
  const Matrix blk = lago::kernel_joint_block(x, xp, h, family);
  Matrix ref(d + 1, d + 1);
  auto k = [&](const Vector& a, const Vector& b) { return lago::kernel_value(a, b, h, family); };
  ref(0, 0) = k(x, xp);
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = step;
    ref(i + 1, 0) = (k(x + e, xp) - k(x - e, xp)) / (2 * step);
    ref(0, i + 1) = (k(x, xp + e) - k(x, xp - e)) / (2 * step);
    // Mixed differences use a wider step to keep roundoff small, and Richardson
    // extrapolation over steps H and 2H to cancel the H^2 truncation term.
    for (Eigen::Index j = 0; j < d; ++j) {
      auto mixed = [&](double H) {
        Vector e2 = Vector::Zero(d), f = Vector::Zero(d);
        e2[i] = H;
        f[j] = H;
        return (k(x + e2, xp + f) - k(x + e2, xp - f) - k(x - e2, xp + f) + k(x - e2, xp - f)) /
               (4 * H * H);
      };
      const double H = 100 * step;
      ref(i + 1, j + 1) = (4 * mixed(H) - mixed(2 * H)) / 3;
    }
  }
  const double floor = 1e-3 * h.scale;
  BlockErrors out;
  out.first_order = std::max(max_rel_error(blk.col(0), ref.col(0), floor),
                             max_rel_error(blk.row(0), ref.row(0), floor));
  out.second_order = max_rel_error(blk.bottomRightCorner(d, d), ref.bottomRightCorner(d, d),
                                   floor / (h.lengthscale * h.lengthscale));
  return out;
}

double hessian_row_fd_error(const Vector& x, const Vector& xp, const lago::KernelHyper& h,
                            lago::KernelFamily family) {
  const Eigen::Index d = x.size();
  const double step = 1e-4 * h.lengthscale;
  const std::vector<Matrix> row = lago::kernel_hessian_row(x, xp, h, family);
  double worst = 0.0;
  for (Eigen::Index m = 0; m <= d; ++m) {
    // Column m of the joint block's first row, i.e. k or dk/dx'_m, as a function of x.
    auto entry = [&](const Vector& a) { return lago::kernel_joint_block(a, xp, h, family)(0, m); };
    Matrix ref(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      Vector e = Vector::Zero(d);
      e[i] = step;
      ref.row(i) = (fd_gradient(entry, x + e, step) - fd_gradient(entry, x - e, step)).transpose() /
                   (2 * step);
    }
    worst = std::max(worst, max_rel_error(row[static_cast<std::size_t>(m)], ref,
                                          1e-2 * h.scale / (h.lengthscale * h.lengthscale)));
  }
  return worst;
}

DensePosterior dense_posterior(const std::vector<lago::Observation>& data,
                               const lago::KernelHyper& hyper, lago::KernelFamily family,
                               double prior_mean, double nugget, const Vector& x) {
  const Eigen::Index d = x.size();
  const Eigen::Index c = d + 1;
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Matrix K(n * c, n * c);
  Vector y(n * c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& oi = data[static_cast<std::size_t>(i)];
    y[i * c] = oi.f - prior_mean;
    y.segment(i * c + 1, d) = oi.grad;
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * c, j * c, c, c) =
          lago::kernel_joint_block(oi.x, data[static_cast<std::size_t>(j)].x, hyper, family);
    }
  }
  K += nugget * Matrix::Identity(n * c, n * c);
  // Cross covariance between [f(x), grad f(x)] and the observations.
  Matrix cross(c, n * c);
  for (Eigen::Index j = 0; j < n; ++j) {
    cross.block(0, j * c, c, c) =
        lago::kernel_joint_block(x, data[static_cast<std::size_t>(j)].x, hyper, family);
  }
  const Eigen::FullPivLU<Matrix> lu(K);
  const Vector alpha = lu.solve(y);
  const Vector v = lu.solve(cross.row(0).transpose());
  DensePosterior out;
  out.mean = prior_mean + cross.row(0).dot(alpha);
  out.variance = lago::kernel_value(x, x, hyper, family) - cross.row(0).dot(v);
  out.mean_grad = cross.bottomRows(d) * alpha;
  return out;
}

MonteCarlo ei_monte_carlo(double mean, double std, double f_best, long samples,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double imp = std::max(f_best - (mean + std * normal(gen)), 0.0);
    sum += imp;
    sum2 += imp * imp;
  }
  const double m = sum / static_cast<double>(samples);
  const double var = sum2 / static_cast<double>(samples) - m * m;
  return {m, std::sqrt(std::max(var, 0.0) / static_cast<double>(samples))};
}

double disk_grid_minimum(const Vector& g, const Matrix& H, double radius, long points) {
  const long rings = static_cast<long>(std::sqrt(static_cast<double>(points) / 3.14159));
  double best = 0.0;
  long used = 1;
  for (long r = 1; r <= rings; ++r) {
    const double rho = radius * static_cast<double>(r) / static_cast<double>(rings);
    const long arcs = std::max(6L, static_cast<long>(2 * 3.14159265358979 * r));
    for (long a = 0; a < arcs; ++a, ++used) {
      const double t = 2 * 3.14159265358979323846 * static_cast<double>(a) / static_cast<double>(arcs);
      Vector s(2);
      s << rho * std::cos(t), rho * std::sin(t);
      best = std::min(best, g.dot(s) + 0.5 * s.dot(H * s));
    }
  }
  return best;
}

double kkt_residual(const Vector& g, const Matrix& H, double radius, const Vector& s,
                    double multiplier) {
  const Eigen::Index d = g.size();
  const double scale = 1.0 + g.norm() + H.norm();
  const Matrix shifted = H + multiplier * Matrix::Identity(d, d);
  double res = (shifted * s + g).norm() / scale;
  res = std::max(res, std::max(0.0, s.norm() - radius) / radius);
  res = std::max(res, std::max(0.0, -multiplier) / scale);
  res = std::max(res, std::abs(multiplier * (radius - s.norm())) / (scale * radius));
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(shifted).eigenvalues().minCoeff();
  res = std::max(res, std::max(0.0, -min_eig) / scale);
  return res;
}

Matrix reference_laplacian(int n) {
  const int m = n - 1;
  auto id = [&](int i, int j) { return (i >= 1 && i <= m && j >= 1 && j <= m) ? (j - 1) * m + (i - 1) : -1; };
  Matrix A = Matrix::Zero(m * m, m * m);
  const double h = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int tris[2][3][2] = {{{i, j}, {i + 1, j}, {i + 1, j + 1}},
                                 {{i, j}, {i + 1, j + 1}, {i, j + 1}}};
      for (const auto& t : tris) {
        Eigen::Matrix2d J;
        J << (t[1][0] - t[0][0]) * h, (t[2][0] - t[0][0]) * h, (t[1][1] - t[0][1]) * h,
            (t[2][1] - t[0][1]) * h;
        const double area = 0.5 * std::abs(J.determinant());
        Eigen::Matrix<double, 2, 3> ref_grads;
        ref_grads << -1, 1, 0, -1, 0, 1;
        const Eigen::Matrix<double, 2, 3> grads = J.inverse().transpose() * ref_grads;
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            const int ia = id(t[a][0], t[a][1]);
            const int ib = id(t[b][0], t[b][1]);
            if (ia < 0 || ib < 0) continue;
            A(ia, ib) += area * grads.col(a).dot(grads.col(b));
          }
        }
      }
    }
  }
  return A;
}

}  // namespace oracle
