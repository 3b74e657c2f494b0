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

#ifndef LAGO_PROBLEMS_HPP
#define LAGO_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lago/common.hpp"

namespace lago {

struct Evaluation {
  double f = 0.0;
  Vector grad;
};

/// An objective with analytic gradient on a box.
struct Problem {
  std::string name;
  int dim = 0;
  Box domain;
  std::function<Evaluation(const Vector&)> evaluate;
  /// Function-evaluation units charged for one gradient.
  int gradient_cost = 1;
  std::optional<double> known_min;
  /// One global minimizer when known (several may exist).
  std::optional<Vector> known_minimizer;
};

struct ProblemOptions {
  /// Mesh resolution for PDE-backed problems.
  int mesh_n = 50;
};

/// Table of problem names accepted by `make_problem`, with their admissible dimensions.
struct ProblemInfo {
  std::string name;
  std::vector<int> dims;
  std::string description;
};
const std::vector<ProblemInfo>& problem_catalog();

/// Throws ConfigError for an unknown name or an unsupported dimension.
Problem make_problem(const std::string& name, int dim, const ProblemOptions& options = {});

/// Max over `n_points` random interior points of
/// |g_fd - g|_inf / max(|g|_inf, 1), with central differences of step
/// 1e-5 times the box width along each axis.
double gradient_check(const Problem& problem, int n_points, std::uint64_t seed);

/// Latin hypercube design: along every axis each of the n equal strata holds
/// exactly one point.
std::vector<Vector> latin_hypercube(const Box& domain, int n, std::uint64_t seed);

/// Counts function-evaluation units: every joint (f, grad f) evaluation costs
/// 1 + gradient_cost.
class EvaluationLedger {
 public:
  struct Entry {
    Vector x;
    long cost = 0;
  };

  explicit EvaluationLedger(int gradient_cost = 1);

  long charge(const Vector& x);
  long units() const { return units_; }
  long units_per_evaluation() const { return 1 + gradient_cost_; }
  int gradient_cost() const { return gradient_cost_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  int gradient_cost_;
  long units_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace lago

#endif  // LAGO_PROBLEMS_HPP
