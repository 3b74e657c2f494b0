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

#include "lago/pde_problem.hpp"

#include <cmath>
#include <numbers>

namespace lago::pde {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Mesh Mesh::unit_square(int n) {
  if (n < 1) throw InputError("mesh resolution must be positive");
  Mesh m;
  m.n = n;
  const int nv = n + 1;
  m.vertices.reserve(static_cast<std::size_t>(nv * nv));
  m.boundary.reserve(static_cast<std::size_t>(nv * nv));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      m.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
      m.boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  auto v = [nv](int i, int j) { return j * nv + i; };
  m.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
      m.triangles.push_back({v(i, j), v(i + 1, j + 1), v(i, j + 1)});
    }
  }
  return m;
}

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point2 a = vertices[static_cast<std::size_t>(tri[1])] - vertices[static_cast<std::size_t>(tri[0])];
  const Point2 b = vertices[static_cast<std::size_t>(tri[2])] - vertices[static_cast<std::size_t>(tri[0])];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

PdeProblemSpec PdeProblemSpec::source_placement(int mesh_n) {
  PdeProblemSpec spec;
  spec.mesh_n = mesh_n;
  spec.kappa = [](const Point2& x) {
    const double s = std::cos(kPi * x.x()) * std::sin(kPi * x.y()) +
                     std::cos(2.0 * kPi * x.x()) * std::sin(kPi * x.y()) +
                     std::cos(2.0 * kPi * x.x()) * std::sin(2.0 * kPi * x.y());
    return std::exp(std::exp(-1.125) * s);
  };
  spec.target = [](const Point2& x) {
    return std::exp(2.0 * x.x() + 2.0 * x.y()) * std::sin(4.0 * kPi * x.x()) *
           std::sin(4.0 * kPi * x.y());
  };
  return spec;
}

double PdeProblemSpec::source(const Point2& x, const Point2& c) const {
  return alpha * std::exp(-beta * (x - c).squaredNorm());
}

FemSystem::FemSystem(const PdeProblemSpec& spec)
    : spec_(spec), mesh_(Mesh::unit_square(spec.mesh_n)) {
  if (!spec_.kappa || !spec_.target) throw InputError("PDE spec needs kappa and target");
  const auto nv = static_cast<int>(mesh_.vertices.size());
  interior_index_.assign(static_cast<std::size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    if (!mesh_.boundary[static_cast<std::size_t>(v)]) {
      interior_index_[static_cast<std::size_t>(v)] = interior_count_++;
    }
  }

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(mesh_.triangles.size() * 9);
  mt.reserve(mesh_.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const double area = mesh_.signed_area(t);
    if (!(area > 0.0)) throw NumericalError("degenerate or inverted triangle in mesh");
    const auto& tri = mesh_.triangles[t];
    std::array<Point2, 3> p;
    for (int a = 0; a < 3; ++a) p[static_cast<std::size_t>(a)] = mesh_.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
    const Point2 centroid = (p[0] + p[1] + p[2]) / 3.0;
    const double kappa = spec_.kappa(centroid);

    // Gradients of the barycentric basis functions.
    std::array<Point2, 3> g;
    for (int a = 0; a < 3; ++a) {
      const Point2& pj = p[static_cast<std::size_t>((a + 1) % 3)];
      const Point2& pk = p[static_cast<std::size_t>((a + 2) % 3)];
      g[static_cast<std::size_t>(a)] = Point2(pj.y() - pk.y(), pk.x() - pj.x()) / (2.0 * area);
    }
    for (int a = 0; a < 3; ++a) {
      const int va = tri[static_cast<std::size_t>(a)];
      for (int b = 0; b < 3; ++b) {
        const int vb = tri[static_cast<std::size_t>(b)];
        mt.emplace_back(va, vb, area / 12.0 * (a == b ? 2.0 : 1.0));
        const int ia = interior_index_[static_cast<std::size_t>(va)];
        const int ib = interior_index_[static_cast<std::size_t>(vb)];
        if (ia >= 0 && ib >= 0) {
          kt.emplace_back(ia, ib,
                          kappa * area * g[static_cast<std::size_t>(a)].dot(g[static_cast<std::size_t>(b)]));
        }
      }
    }
  }
  stiffness_.resize(interior_count_, interior_count_);
  stiffness_.setFromTriplets(kt.begin(), kt.end());
  mass_.resize(nv, nv);
  mass_.setFromTriplets(mt.begin(), mt.end());

  auto factor = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(stiffness_);
  if (factor->info() != Eigen::Success) throw NumericalError("stiffness factorization failed");
  factor_ = std::move(factor);

  target_nodal_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    target_nodal_[v] = spec_.target(mesh_.vertices[static_cast<std::size_t>(v)]);
  }

  // Target terms of the cost use a degree-5 rule: the nodal interpolant of the
  // oscillating target is too coarse for resolution-independent costs.
  const double r15 = std::sqrt(15.0);
  const std::array<std::array<double, 4>, 7> rule = {{
      {1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
      {(9 - 2 * r15) / 21, (6 + r15) / 21, (6 + r15) / 21, (155 + r15) / 1200},
      {(6 + r15) / 21, (9 - 2 * r15) / 21, (6 + r15) / 21, (155 + r15) / 1200},
      {(6 + r15) / 21, (6 + r15) / 21, (9 - 2 * r15) / 21, (155 + r15) / 1200},
      {(9 + 2 * r15) / 21, (6 - r15) / 21, (6 - r15) / 21, (155 - r15) / 1200},
      {(6 - r15) / 21, (9 + 2 * r15) / 21, (6 - r15) / 21, (155 - r15) / 1200},
      {(6 - r15) / 21, (6 - r15) / 21, (9 + 2 * r15) / 21, (155 - r15) / 1200},
  }};
  target_load_ = Vector::Zero(nv);
  target_norm2_ = 0.0;
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const double area = mesh_.signed_area(t);
    const auto& tri = mesh_.triangles[t];
    for (const auto& q : rule) {
      Point2 x = Point2::Zero();
      for (std::size_t a = 0; a < 3; ++a) x += q[a] * mesh_.vertices[static_cast<std::size_t>(tri[a])];
      const double yd = spec_.target(x);
      target_norm2_ += area * q[3] * yd * yd;
      for (std::size_t a = 0; a < 3; ++a) target_load_[tri[a]] += area * q[3] * q[a] * yd;
    }
  }
}

FemSystem FemSystem::with_target(Vector target_nodal) const {
  if (target_nodal.size() != target_nodal_.size()) throw InputError("target size mismatch");
  FemSystem out = *this;
  out.target_load_ = mass_ * target_nodal;
  out.target_norm2_ = target_nodal.dot(out.target_load_);
  out.target_nodal_ = std::move(target_nodal);
  return out;
}

Vector FemSystem::load(const Point2& c, Eigen::MatrixX2d* dload) const {
  Vector b = Vector::Zero(interior_count_);
  if (dload) dload->setZero(interior_count_, 2);
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const double area = mesh_.signed_area(t);
    const auto& tri = mesh_.triangles[t];
    // Edge-midpoint rule: phi_a is 1/2 at the two midpoints of edges touching a.
    std::array<double, 3> u_mid;
    std::array<Point2, 3> du_mid;
    for (int e = 0; e < 3; ++e) {
      const Point2 m = 0.5 * (mesh_.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(e)])] +
                              mesh_.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((e + 1) % 3)])]);
      const double u = spec_.source(m, c);
      u_mid[static_cast<std::size_t>(e)] = u;
      du_mid[static_cast<std::size_t>(e)] = 2.0 * spec_.beta * u * (m - c);
    }
    for (int a = 0; a < 3; ++a) {
      const int ia = interior_index_[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
      if (ia < 0) continue;
      // Edges (a, a+1) and (a-1, a).
      const auto e0 = static_cast<std::size_t>(a);
      const auto e1 = static_cast<std::size_t>((a + 2) % 3);
      b[ia] += area / 6.0 * (u_mid[e0] + u_mid[e1]);
      if (dload) dload->row(ia) += area / 6.0 * (du_mid[e0] + du_mid[e1]).transpose();
    }
  }
  return b;
}

Vector FemSystem::solve_interior(const Vector& rhs) const {
  const Vector z = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success || !z.allFinite()) {
    throw NumericalError("FEM linear solve failed");
  }
  Vector nodal = Vector::Zero(static_cast<Eigen::Index>(mesh_.vertices.size()));
  for (std::size_t v = 0; v < interior_index_.size(); ++v) {
    if (interior_index_[v] >= 0) nodal[static_cast<Eigen::Index>(v)] = z[interior_index_[v]];
  }
  return nodal;
}

Vector FemSystem::restrict_interior(const Vector& nodal) const {
  Vector out(interior_count_);
  for (std::size_t v = 0; v < interior_index_.size(); ++v) {
    if (interior_index_[v] >= 0) out[interior_index_[v]] = nodal[static_cast<Eigen::Index>(v)];
  }
  return out;
}

Vector solve_state(const FemSystem& system, const Point2& c) {
  return system.solve_interior(system.load(c));
}

Vector solve_adjoint(const FemSystem& system, const Vector& state) {
  const Vector rhs = system.mass() * state - system.target_load();
  return system.solve_interior(system.restrict_interior(rhs));
}

CostAndGradient reduced_cost_and_gradient(const FemSystem& system, const Point2& c) {
  Eigen::MatrixX2d dload;
  const Vector b = system.load(c, &dload);
  const Vector y = system.solve_interior(b);
  const Vector my = system.mass() * y;
  const Vector p = system.solve_interior(system.restrict_interior(my - system.target_load()));
  CostAndGradient out;
  out.cost = 0.5 * y.dot(my) - y.dot(system.target_load()) + 0.5 * system.target_norm2();
  out.grad = dload.transpose() * system.restrict_interior(p);
  return out;
}

}  // namespace lago::pde

namespace lago {

Problem make_pde_problem(int mesh_n) {
  auto system = std::make_shared<const pde::FemSystem>(pde::PdeProblemSpec::source_placement(mesh_n));
  Problem p;
  p.name = "pde-source-2d";
  p.dim = 2;
  p.domain = {Vector::Zero(2), Vector::Ones(2)};
  p.gradient_cost = 1;
  p.evaluate = [system](const Vector& x) {
    const auto r = pde::reduced_cost_and_gradient(*system, pde::Point2(x[0], x[1]));
    return Evaluation{r.cost, Vector(r.grad)};
  };
  p.known_minimizer = Vector(2);
  *p.known_minimizer << 0.89, 0.89;
  return p;
}

}  // namespace lago
