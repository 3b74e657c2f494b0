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

#ifndef LAGO_GRADIENT_GP_HPP
#define LAGO_GRADIENT_GP_HPP

#include <optional>
#include <vector>

#include <Eigen/Cholesky>

#include "lago/common.hpp"
#include "lago/kernels.hpp"

namespace lago {

/// One evaluated point: value and gradient of the objective.
struct Observation {
  Vector x;
  double f = 0.0;
  Vector grad;
  int eval_index = -1;

  void validate(Eigen::Index dim) const;
};

struct PosteriorQuery {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<Vector> mean_grad;
  std::optional<Matrix> mean_hessian;

  double stddev() const;
};

/// Settings that stay fixed while a model is re-conditioned and re-fitted.
struct GpSettings {
  KernelFamily family = KernelFamily::Matern72;
  double nugget = 1e-9;
  /// When false, gradient channels are ignored and the model is a plain GP on f.
  bool use_gradients = true;
  /// Search box for hyperparameter fitting, relative to the domain diagonal
  /// (lengthscale) and to the empirical variance of f (scale), in log10.
  double log10_lengthscale_lo = -2.0;
  double log10_lengthscale_hi = 1.0;
  double log10_scale_lo = -4.0;
  double log10_scale_hi = 6.0;
  int fit_restarts = 8;
  int fit_max_evaluations = 60;
};

struct HyperFit {
  KernelHyper hyper;
  double nlml = kInf;
  /// False when every start failed and the previous hyperparameters were kept.
  bool success = false;
};

/// Gaussian process on [f, grad f] conditioned on a set of observations.
/// Values are immutable: conditioning or refitting returns a new model.
class GradientGpModel {
 public:
  GradientGpModel(GpSettings settings, KernelHyper hyper, double prior_mean, Box domain);

  /// New model conditioned on `dataset` (replaces any previous data).
  GradientGpModel condition(std::vector<Observation> dataset) const;
  GradientGpModel with_hyper(const KernelHyper& hyper) const;

  PosteriorQuery posterior(const Vector& x, bool want_grad = false,
                           bool want_hessian = false) const;

  /// Negative log marginal likelihood of the current data under `candidate`.
  /// Returns +inf when the kernel matrix cannot be factorized.
  double neg_log_marginal_likelihood(const KernelHyper& candidate) const;

  /// Multi-start Nelder-Mead over (log10 lengthscale, log10 scale).
  HyperFit fit_hyperparameters(std::uint64_t seed) const;

  /// 2-norm condition number of the regularized kernel matrix (+inf if singular).
  double condition_number() const;

  /// Regularized joint kernel matrix, assembled from scratch.
  Matrix kernel_matrix() const;
  /// Stacked observation vector minus prior mean.
  Vector residual() const;

  const GpSettings& settings() const { return settings_; }
  const KernelHyper& hyper() const { return hyper_; }
  double prior_mean() const { return prior_mean_; }
  const Box& domain() const { return domain_; }
  const std::vector<Observation>& dataset() const { return data_; }
  Eigen::Index dim() const { return domain_.dim(); }
  Eigen::Index channels() const { return settings_.use_gradients ? dim() + 1 : 1; }
  bool conditioned() const { return !data_.empty(); }
  /// Diagonal regularization actually used by the factorization.
  double effective_nugget() const { return effective_nugget_; }

 private:
  Matrix assemble(const KernelHyper& hyper) const;
  void factorize();

  GpSettings settings_;
  KernelHyper hyper_;
  double prior_mean_ = 0.0;
  Box domain_;
  std::vector<Observation> data_;
  Eigen::LLT<Matrix> chol_;
  Vector alpha_;
  double effective_nugget_ = 0.0;
};

}  // namespace lago

#endif  // LAGO_GRADIENT_GP_HPP
