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

#include "lago/gradient_gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "lago/optim.hpp"

namespace lago {

void Observation::validate(Eigen::Index dim) const {
  if (x.size() != dim || grad.size() != dim) {
    throw InputError("observation dimension does not match the model");
  }
  if (!std::isfinite(f) || !grad.allFinite() || !x.allFinite()) {
    throw InputError("observation contains non-finite values");
  }
}

double PosteriorQuery::stddev() const { return std::sqrt(std::max(variance, 0.0)); }

GradientGpModel::GradientGpModel(GpSettings settings, KernelHyper hyper, double prior_mean,
                                 Box domain)
    : settings_(settings), hyper_(hyper), prior_mean_(prior_mean), domain_(std::move(domain)) {
  hyper_.validate();
  if (settings_.nugget < 0.0) throw InputError("nugget must be nonnegative");
  if (domain_.lower.size() != domain_.upper.size() || domain_.dim() == 0) {
    throw InputError("gradient_gp: invalid domain");
  }
}

GradientGpModel GradientGpModel::condition(std::vector<Observation> dataset) const {
  if (dataset.empty()) throw InputError("cannot condition on an empty dataset");
  for (const auto& obs : dataset) obs.validate(dim());
  GradientGpModel out(settings_, hyper_, prior_mean_, domain_);
  out.data_ = std::move(dataset);
  out.factorize();
  return out;
}

GradientGpModel GradientGpModel::with_hyper(const KernelHyper& hyper) const {
  GradientGpModel out(settings_, hyper, prior_mean_, domain_);
  if (!data_.empty()) {
    out.data_ = data_;
    out.factorize();
  }
  return out;
}

Matrix GradientGpModel::assemble(const KernelHyper& hyper) const {
  const Eigen::Index n = static_cast<Eigen::Index>(data_.size());
  const Eigen::Index c = channels();
  const Eigen::Index d = dim();
  Matrix k(n * c, n * c);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Vector delta = data_[i].x - data_[j].x;
      const RadialProfile p = radial_profile(delta.norm(), hyper, settings_.family);
      auto blk = k.block(i * c, j * c, c, c);
      blk(0, 0) = p.k;
      if (settings_.use_gradients) {
        blk.block(1, 0, d, 1) = p.f1 * delta;
        blk.block(0, 1, 1, d) = -p.f1 * delta.transpose();
        blk.bottomRightCorner(d, d) = -p.f2 * delta * delta.transpose();
        blk.bottomRightCorner(d, d).diagonal().array() -= p.f1;
      }
      if (i != j) k.block(j * c, i * c, c, c) = blk.transpose();
    }
  }
  return k;
}

Matrix GradientGpModel::kernel_matrix() const {
  Matrix k = assemble(hyper_);
  k.diagonal().array() += effective_nugget_;
  return k;
}

Vector GradientGpModel::residual() const {
  const Eigen::Index c = channels();
  Vector r(static_cast<Eigen::Index>(data_.size()) * c);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i) * c;
    r[row] = data_[i].f - prior_mean_;
    if (settings_.use_gradients) r.segment(row + 1, dim()) = data_[i].grad;
  }
  return r;
}

void GradientGpModel::factorize() {
  const Matrix k = assemble(hyper_);
  // Escalate the diagonal jitter by decades until the factorization succeeds.
  double jitter = settings_.nugget;
  const double ceiling = 1e-6 * hyper_.scale;
  for (;;) {
    Matrix kt = k;
    kt.diagonal().array() += jitter;
    chol_.compute(kt);
    if (chol_.info() == Eigen::Success) {
      effective_nugget_ = jitter;
      break;
    }
    if (jitter >= ceiling) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(kt, Eigen::EigenvaluesOnly);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      throw IllConditionedError("gradient_gp: kernel matrix factorization failed",
                                lo > 0.0 ? hi / lo : kInf);
    }
    jitter = std::max(jitter * 10.0, 1e-12 * hyper_.scale);
  }
  alpha_ = chol_.solve(residual());
}

PosteriorQuery GradientGpModel::posterior(const Vector& x, bool want_grad,
                                          bool want_hessian) const {
  if (x.size() != dim()) throw InputError("posterior: dimension mismatch");
  if (want_hessian && settings_.family != KernelFamily::Matern72) {
    throw UnsupportedSmoothnessError("posterior mean Hessian requires matern72");
  }
  PosteriorQuery q;
  if (data_.empty()) {
    q.mean = prior_mean_;
    q.variance = hyper_.scale;
    if (want_grad) q.mean_grad = Vector::Zero(dim());
    if (want_hessian) q.mean_hessian = Matrix::Zero(dim(), dim());
    return q;
  }

  const Eigen::Index c = channels();
  const Eigen::Index d = dim();
  const Eigen::Index n = static_cast<Eigen::Index>(data_.size());
  Vector kvec(n * c);

  if (!want_grad && !want_hessian) {
    // Allocation-free path used inside acquisition loops.
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector& xi = data_[static_cast<std::size_t>(i)].x;
      double r2 = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) r2 += (x[j] - xi[j]) * (x[j] - xi[j]);
      const RadialProfile p = radial_profile(std::sqrt(r2), hyper_, settings_.family);
      kvec[i * c] = p.k;
      if (settings_.use_gradients) {
        for (Eigen::Index j = 0; j < d; ++j) kvec[i * c + 1 + j] = -p.f1 * (x[j] - xi[j]);
      }
    }
    q.mean = prior_mean_ + kvec.dot(alpha_);
    chol_.matrixL().solveInPlace(kvec);
    q.variance = std::max(hyper_.scale - kvec.squaredNorm(), 0.0);
    return q;
  }

  Vector grad = Vector::Zero(d);
  Matrix hess = Matrix::Zero(d, d);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector delta = x - data_[i].x;
    const RadialProfile p = radial_profile(delta.norm(), hyper_, settings_.family);
    const double a0 = alpha_[i * c];
    kvec[i * c] = p.k;
    double da = 0.0;
    Vector ag;
    if (settings_.use_gradients) {
      kvec.segment(i * c + 1, d) = -p.f1 * delta;
      ag = alpha_.segment(i * c + 1, d);
      da = delta.dot(ag);
    }
    if (want_grad) {
      grad += (p.f1 * a0) * delta;
      if (settings_.use_gradients) grad -= p.f2 * da * delta + p.f1 * ag;
    }
    if (want_hessian) {
      hess += a0 * (p.f2 * delta * delta.transpose());
      hess.diagonal().array() += a0 * p.f1;
      if (settings_.use_gradients) {
        hess -= p.f3 * da * delta * delta.transpose();
        hess.diagonal().array() -= p.f2 * da;
        hess -= p.f2 * (ag * delta.transpose() + delta * ag.transpose());
      }
    }
  }

  q.mean = prior_mean_ + kvec.dot(alpha_);
  const Vector v = chol_.matrixL().solve(kvec);
  q.variance = std::max(hyper_.scale - v.squaredNorm(), 0.0);
  if (want_grad) q.mean_grad = grad;
  if (want_hessian) q.mean_hessian = 0.5 * (hess + hess.transpose());
  return q;
}

double GradientGpModel::neg_log_marginal_likelihood(const KernelHyper& candidate) const {
  if (data_.empty()) throw InputError("NLML needs a non-empty dataset");
  if (!(candidate.lengthscale > 0.0) || !(candidate.scale > 0.0)) return kInf;
  Matrix k = assemble(candidate);
  k.diagonal().array() += settings_.nugget;
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) return kInf;
  const Vector r = residual();
  const Vector w = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double value = 0.5 * w.squaredNorm() + 0.5 * logdet +
                       0.5 * static_cast<double>(r.size()) * std::log(2.0 * std::numbers::pi);
  return std::isfinite(value) ? value : kInf;
}

HyperFit GradientGpModel::fit_hyperparameters(std::uint64_t seed) const {
  if (data_.empty()) throw InputError("fit_hyperparameters needs a non-empty dataset");

  double mean_f = 0.0;
  for (const auto& o : data_) mean_f += o.f;
  mean_f /= static_cast<double>(data_.size());
  double var_f = 0.0;
  for (const auto& o : data_) var_f += (o.f - mean_f) * (o.f - mean_f);
  var_f /= static_cast<double>(data_.size());
  if (!(var_f > 1e-300)) var_f = 1.0;

  const double log_diag = std::log10(domain_.diagonal());
  const double log_var = std::log10(var_f);
  Vector lo(2), hi(2);
  lo << log_diag + settings_.log10_lengthscale_lo, log_var + settings_.log10_scale_lo;
  hi << log_diag + settings_.log10_lengthscale_hi, log_var + settings_.log10_scale_hi;

  auto to_hyper = [](const Vector& p) {
    return KernelHyper{std::pow(10.0, p[0]), std::pow(10.0, p[1])};
  };
  auto objective = [&](const Vector& p) { return neg_log_marginal_likelihood(to_hyper(p)); };
  auto project = [&](const Vector& p) -> Vector { return p.cwiseMax(lo).cwiseMin(hi); };

  Rng rng(seed);
  Vector step(2);
  step << 0.1 * (hi[0] - lo[0]), 0.1 * (hi[1] - lo[1]);
  SimplexOptions opts;
  opts.max_evaluations = settings_.fit_max_evaluations;
  opts.f_tolerance = 1e-8;
  opts.x_tolerance = 1e-4;

  HyperFit best{hyper_, kInf, false};
  for (int s = 0; s < std::max(settings_.fit_restarts, 1); ++s) {
    Vector start(2);
    if (s == 0) {
      start << std::log10(hyper_.lengthscale), std::log10(hyper_.scale);
    } else {
      start << rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]);
    }
    const SimplexResult r = nelder_mead(objective, project, project(start), step, opts);
    if (std::isfinite(r.value) && r.value < best.nlml) {
      best = {to_hyper(r.x), r.value, true};
    }
  }
  return best;
}

double GradientGpModel::condition_number() const {
  if (data_.empty()) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel_matrix(), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return kInf;
  return hi / lo;
}

}  // namespace lago
