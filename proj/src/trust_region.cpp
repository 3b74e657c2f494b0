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

#include "lago/trust_region.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace lago {

double quadratic_model(const TrustRegionState& state, const Vector& s) {
  if (s.size() != state.grad_center.size()) throw InputError("quadratic_model: bad step size");
  return state.f_center + state.grad_center.dot(s) + 0.5 * s.dot(state.hessian * s);
}

namespace {

double step_norm_at(const Vector& gt, const Vector& evals, double lambda) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < gt.size(); ++i) {
    if (gt[i] == 0.0) continue;
    const double t = gt[i] / (evals[i] + lambda);
    acc += t * t;
  }
  return std::sqrt(acc);
}

// Solves |s(lambda)| = radius for lambda in (lo, hi), where |s| decreases in lambda.
double secular_root(const Vector& gt, const Vector& evals, double radius, double lo, double hi) {
  // Make sure hi brackets the root.
  while (step_norm_at(gt, evals, hi) > radius) hi = 2.0 * hi + 1.0;
  double lambda = hi;
  for (int it = 0; it < 500; ++it) {
    const double norm = step_norm_at(gt, evals, lambda);
    const double phi = 1.0 / norm - 1.0 / radius;
    if (std::abs(norm - radius) <= 1e-15 * radius) break;
    if (phi < 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    // Newton on 1/|s| - 1/radius, which is concave and increasing.
    double dnorm2 = 0.0;
    for (Eigen::Index i = 0; i < gt.size(); ++i) {
      const double den = evals[i] + lambda;
      dnorm2 += -2.0 * gt[i] * gt[i] / (den * den * den);
    }
    const double dphi = -0.5 * dnorm2 / (norm * norm * norm);
    double next = lambda - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

SubproblemSolution solve_subproblem(const Vector& grad, const Matrix& hessian, double radius) {
  const Eigen::Index d = grad.size();
  if (hessian.rows() != d || hessian.cols() != d) {
    throw InputError("solve_subproblem: dimension mismatch");
  }
  if (!(radius > 0.0)) throw InputError("solve_subproblem: radius must be positive");
  const double hnorm = hessian.cwiseAbs().maxCoeff();
  if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + hnorm)) {
    throw InputError("solve_subproblem: Hessian is not symmetric");
  }

  const Matrix sym = 0.5 * (hessian + hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector evals = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  Vector gt = q.transpose() * grad;
  const double gnorm = grad.norm();
  const double lam_min = evals[0];
  const double eig_tol = 1e-12 * std::max(1.0, evals.cwiseAbs().maxCoeff());

  SubproblemSolution sol;
  auto finish = [&](const Vector& s_tilde, double lambda) {
    sol.step = q * s_tilde;
    sol.multiplier = lambda;
    sol.model_decrease = std::max(0.0, -(grad.dot(sol.step) + 0.5 * sol.step.dot(sym * sol.step)));
    return sol;
  };

  // Interior Newton step.
  if (lam_min > eig_tol) {
    const Vector s_tilde = -gt.cwiseQuotient(evals);
    if (s_tilde.norm() <= radius) return finish(s_tilde, 0.0);
  }

  // Components of g along the leftmost eigenspace.
  const double g_tol = 1e-12 * std::max(gnorm, std::numeric_limits<double>::min());
  double g_min_space = 0.0;
  for (Eigen::Index i = 0; i < d && evals[i] <= lam_min + eig_tol; ++i) {
    g_min_space = std::max(g_min_space, std::abs(gt[i]));
  }
  const double lam_lo = std::max(0.0, -lam_min);

  if (g_min_space <= g_tol && lam_min <= eig_tol) {
    // Potential hard case: drop the leftmost components and test the step at lam_lo.
    Vector gt_reduced = gt;
    for (Eigen::Index i = 0; i < d && evals[i] <= lam_min + eig_tol; ++i) gt_reduced[i] = 0.0;
    Vector s_part = Vector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (gt_reduced[i] != 0.0) s_part[i] = -gt_reduced[i] / (evals[i] + lam_lo);
    }
    const double part_norm = s_part.norm();
    if (part_norm <= radius) {
      if (lam_lo <= eig_tol) return finish(s_part, 0.0);
      const double tau = std::sqrt(std::max(0.0, radius * radius - part_norm * part_norm));
      Vector z = q.col(0);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(z[i]) > 1e-12) {
          if (z[i] < 0.0) z = -z;
          break;
        }
      }
      sol.hard_case = true;
      sol.step = q * s_part + tau * z;
      sol.multiplier = lam_lo;
      sol.model_decrease =
          std::max(0.0, -(grad.dot(sol.step) + 0.5 * sol.step.dot(sym * sol.step)));
      return sol;
    }
    gt = gt_reduced;
  }

  const double lambda = secular_root(gt, evals, radius, lam_lo, gnorm / radius + lam_lo);
  Vector s_tilde(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    s_tilde[i] = gt[i] == 0.0 ? 0.0 : -gt[i] / (evals[i] + lambda);
  }
  return finish(s_tilde, lambda);
}

Sr1Result sr1_update(const Matrix& hessian, const Vector& s, const Vector& y, double r) {
  if (s.size() != hessian.rows() || y.size() != s.size()) {
    throw InputError("sr1_update: dimension mismatch");
  }
  const Vector v = y - hessian * s;
  const double den = v.dot(s);
  const double vnorm = v.norm();
  if (vnorm == 0.0 || den == 0.0 || std::abs(den) < r * s.norm() * vnorm) {
    return {hessian, false};
  }
  Matrix updated = hessian + (v * v.transpose()) / den;
  updated = 0.5 * (updated + updated.transpose());
  return {updated, true};
}

double improvement_ratio(double f_old, double f_trial, double model_decrease) {
  const double actual = f_old - f_trial;
  if (std::abs(model_decrease) < 1e-14) return actual > 0.0 ? kInf : -kInf;
  return actual / model_decrease;
}

TrStepOutcome tr_step(const TrustRegionState& state, double f_trial, const Vector& grad_trial,
                      const Vector& s, double model_decrease, double eta, double r,
                      double max_radius) {
  TrStepOutcome out;
  out.trial_point = state.center + s;
  out.step_norm = s.norm();
  out.rho = improvement_ratio(state.f_center, f_trial, model_decrease);
  out.accepted = out.rho > eta;

  TrustRegionState next = state;
  next.max_radius = max_radius;
  if (out.accepted) {
    next.center = out.trial_point;
    next.f_center = f_trial;
    next.grad_center = grad_trial;
  }

  const double delta = state.radius;
  if (out.rho > 0.75 && out.step_norm > 0.8 * delta) {
    next.radius = std::min(max_radius, 2.0 * delta);
  } else if (out.rho < 0.1) {
    next.radius = 0.5 * delta;
  } else {
    next.radius = delta;
  }

  const Sr1Result upd = sr1_update(state.hessian, s, grad_trial - state.grad_center, r);
  next.hessian = upd.hessian;
  out.hessian_updated = upd.updated;
  out.new_state = std::move(next);
  return out;
}

}  // namespace lago
