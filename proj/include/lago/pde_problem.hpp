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

#ifndef LAGO_PDE_PROBLEM_HPP
#define LAGO_PDE_PROBLEM_HPP

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "lago/common.hpp"
#include "lago/problems.hpp"

namespace lago::pde {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Point2 = Eigen::Vector2d;

/// Triangulated unit square: n x n squares, each cut along its
/// lower-left to upper-right diagonal.
struct Mesh {
  int n = 0;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary;

  static Mesh unit_square(int n);
  double signed_area(std::size_t t) const;
};

/// Coefficients of  -div(kappa grad y) = u(., c),  u = alpha exp(-beta |x - c|^2),
/// with homogeneous Dirichlet conditions and tracking target y_d.
struct PdeProblemSpec {
  double alpha = 5e2;
  double beta = 5e3;
  int mesh_n = 50;
  std::function<double(const Point2&)> kappa;
  std::function<double(const Point2&)> target;

  /// Diffusion coefficient and target of the source-placement benchmark.
  static PdeProblemSpec source_placement(int mesh_n = 50);
  double source(const Point2& x, const Point2& c) const;
};

/// Assembled finite-element system; immutable and shareable across threads.
class FemSystem {
 public:
  FemSystem(const PdeProblemSpec& spec);

  const PdeProblemSpec& spec() const { return spec_; }
  const Mesh& mesh() const { return mesh_; }
  /// Stiffness over interior vertices.
  const SparseMatrix& stiffness() const { return stiffness_; }
  /// Consistent P1 mass matrix over all vertices.
  const SparseMatrix& mass() const { return mass_; }
  /// Vertex index -> interior index, or -1 on the boundary.
  const std::vector<int>& interior_index() const { return interior_index_; }
  int interior_count() const { return interior_count_; }
  /// Target sampled at the vertices.
  const Vector& target_nodal() const { return target_nodal_; }
  /// Integrals of target * phi_v over the domain, one per vertex.
  const Vector& target_load() const { return target_load_; }
  /// Integral of target^2.
  double target_norm2() const { return target_norm2_; }

  /// Same system with a piecewise linear target given by its nodal values.
  FemSystem with_target(Vector target_nodal) const;

  /// Interior load vector of u(., c); optionally its derivative in c (columns).
  Vector load(const Point2& c, Eigen::MatrixX2d* dload = nullptr) const;
  /// Solve A z = rhs for an interior right-hand side; returns the full nodal vector.
  Vector solve_interior(const Vector& rhs) const;

  Vector restrict_interior(const Vector& nodal) const;

 private:
  PdeProblemSpec spec_;
  Mesh mesh_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  std::vector<int> interior_index_;
  int interior_count_ = 0;
  Vector target_nodal_;
  Vector target_load_;
  double target_norm2_ = 0.0;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor_;
};

/// Nodal state y solving A y = b(c), zero on the boundary.
Vector solve_state(const FemSystem& system, const Point2& c);

/// Nodal adjoint p solving A p = M y - target_load, zero on the boundary.
Vector solve_adjoint(const FemSystem& system, const Vector& state);

struct CostAndGradient {
  double cost = 0.0;
  Point2 grad = Point2::Zero();
};

/// J(c) = |y_h - y_d|^2 / 2 in L2 and its exact discrete gradient p^T db/dc.
CostAndGradient reduced_cost_and_gradient(const FemSystem& system, const Point2& c);

}  // namespace lago::pde

namespace lago {

/// The source-placement problem as an optimization benchmark on [0,1]^2.
Problem make_pde_problem(int mesh_n);

}  // namespace lago

#endif  // LAGO_PDE_PROBLEM_HPP
