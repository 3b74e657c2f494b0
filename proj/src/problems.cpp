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

#include "lago/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lago/pde_problem.hpp"

namespace lago {

namespace {

constexpr double kPi = std::numbers::pi;

Box cube(int d, double lo, double hi) {
  return {Vector::Constant(d, lo), Vector::Constant(d, hi)};
}

Evaluation branin(const Vector& x) {
  const double b = 5.1 / (4.0 * kPi * kPi);
  const double c = 5.0 / kPi;
  const double t = 1.0 / (8.0 * kPi);
  const double a = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
  Evaluation e;
  e.f = a * a + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
  e.grad.resize(2);
  e.grad[0] = 2.0 * a * (-2.0 * b * x[0] + c) - 10.0 * (1.0 - t) * std::sin(x[0]);
  e.grad[1] = 2.0 * a;
  return e;
}

Evaluation styblinski_tang(const Vector& x) {
  Evaluation e;
  e.f = 0.0;
  e.grad.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    e.f += 0.5 * (v * v * v * v - 16.0 * v * v + 5.0 * v);
    e.grad[i] = 0.5 * (4.0 * v * v * v - 32.0 * v + 5.0);
  }
  return e;
}

Evaluation rosenbrock(const Vector& x) {
  const double r = x[1] - x[0] * x[0];
  Evaluation e;
  e.f = (1.0 - x[0]) * (1.0 - x[0]) + 100.0 * r * r;
  e.grad.resize(2);
  e.grad[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * r;
  e.grad[1] = 200.0 * r;
  return e;
}

// 2D Levy with w_i = 1 + (x_i - 1) / 4.
Evaluation levy(const Vector& x) {
  const double w1 = 1.0 + (x[0] - 1.0) / 4.0;
  const double w2 = 1.0 + (x[1] - 1.0) / 4.0;
  const double s1 = std::sin(kPi * w1);
  const double s1p = std::sin(kPi * w1 + 1.0);
  const double s2 = std::sin(2.0 * kPi * w2);
  Evaluation e;
  e.f = s1 * s1 + (w1 - 1.0) * (w1 - 1.0) * (1.0 + 10.0 * s1p * s1p) +
        (w2 - 1.0) * (w2 - 1.0) * (1.0 + s2 * s2);
  const double dw1 = kPi * std::sin(2.0 * kPi * w1) + 2.0 * (w1 - 1.0) * (1.0 + 10.0 * s1p * s1p) +
                     10.0 * kPi * (w1 - 1.0) * (w1 - 1.0) * std::sin(2.0 * kPi * w1 + 2.0);
  const double dw2 = 2.0 * (w2 - 1.0) * (1.0 + s2 * s2) +
                     2.0 * kPi * (w2 - 1.0) * (w2 - 1.0) * std::sin(4.0 * kPi * w2);
  e.grad.resize(2);
  e.grad[0] = 0.25 * dw1;
  e.grad[1] = 0.25 * dw2;
  return e;
}

Evaluation sphere(const Vector& x) { return {x.squaredNorm(), 2.0 * x}; }

}  // namespace

const std::vector<ProblemInfo>& problem_catalog() {
  static const std::vector<ProblemInfo> catalog = {
      {"branin", {2}, "Branin on [-5,10]x[0,15], min 0.39789"},
      {"styblinski-tang", {2, 5}, "Styblinski-Tang on [-5,5]^d, min -39.16617 d"},
      {"rosenbrock", {2}, "Rosenbrock on [-5,10]^2, min 0"},
      {"levy", {2}, "Levy on [-10,10]^2, min 0"},
      {"sphere", {2}, "Sphere on [-5.12,5.12]^2, min 0"},
      {"pde-source-2d", {2}, "P1 FEM source placement on [0,1]^2, adjoint gradient"},
  };
  return catalog;
}

Problem make_problem(const std::string& name, int dim, const ProblemOptions& options) {
  const auto& catalog = problem_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const ProblemInfo& p) { return p.name == name; });
  if (it == catalog.end()) throw ConfigError("unknown problem: " + name);
  if (std::find(it->dims.begin(), it->dims.end(), dim) == it->dims.end()) {
    throw ConfigError("problem " + name + " does not support dimension " + std::to_string(dim));
  }

  if (name == "pde-source-2d") return make_pde_problem(options.mesh_n);

  Problem p;
  p.name = name;
  p.dim = dim;
  p.gradient_cost = dim;
  if (name == "branin") {
    p.domain = {Vector::Zero(2), Vector::Zero(2)};
    p.domain.lower << -5.0, 0.0;
    p.domain.upper << 10.0, 15.0;
    p.evaluate = branin;
    p.known_min = 10.0 / (8.0 * kPi);  // 0.397887...
    p.known_minimizer = Vector(2);
    *p.known_minimizer << kPi, 2.275;
  } else if (name == "styblinski-tang") {
    p.domain = cube(dim, -5.0, 5.0);
    p.evaluate = styblinski_tang;
    // Exact per-coordinate minimum; the commonly tabulated -39.16599 is slightly off.
    p.known_min = -39.16616570377141 * dim;
    p.known_minimizer = Vector::Constant(dim, -2.903534027771177);
  } else if (name == "rosenbrock") {
    p.domain = cube(2, -5.0, 10.0);
    p.evaluate = rosenbrock;
    p.known_min = 0.0;
    p.known_minimizer = Vector::Ones(2);
  } else if (name == "levy") {
    p.domain = cube(2, -10.0, 10.0);
    p.evaluate = levy;
    p.known_min = 0.0;
    p.known_minimizer = Vector::Ones(2);
  } else {
    p.domain = cube(2, -5.12, 5.12);
    p.evaluate = sphere;
    p.known_min = 0.0;
    p.known_minimizer = Vector::Zero(2);
  }
  return p;
}

double gradient_check(const Problem& problem, int n_points, std::uint64_t seed) {
  Rng rng(seed);
  const Vector width = problem.domain.upper - problem.domain.lower;
  const Box interior{problem.domain.lower + 0.01 * width, problem.domain.upper - 0.01 * width};
  double worst = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const Vector x = rng.uniform_in(interior);
    const Evaluation e = problem.evaluate(x);
    Vector fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-5 * width[i];
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (problem.evaluate(xp).f - problem.evaluate(xm).f) / (2.0 * h);
    }
    const double err =
        (fd - e.grad).cwiseAbs().maxCoeff() / std::max(e.grad.cwiseAbs().maxCoeff(), 1.0);
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<Vector> latin_hypercube(const Box& domain, int n, std::uint64_t seed) {
  if (n < 1) throw InputError("latin_hypercube: n must be positive");
  const Eigen::Index d = domain.dim();
  Rng rng(seed);
  std::vector<Vector> pts(static_cast<std::size_t>(n), Vector(d));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.index(i + 1)]);
    }
    const double width = domain.upper[j] - domain.lower[j];
    for (int i = 0; i < n; ++i) {
      const double u = (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n;
      pts[static_cast<std::size_t>(i)][j] = domain.lower[j] + width * u;
    }
  }
  return pts;
}

EvaluationLedger::EvaluationLedger(int gradient_cost) : gradient_cost_(gradient_cost) {
  if (gradient_cost < 0) throw InputError("gradient cost must be nonnegative");
}

long EvaluationLedger::charge(const Vector& x) {
  const long cost = units_per_evaluation();
  units_ += cost;
  entries_.push_back({x, cost});
  return cost;
}

}  // namespace lago
