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

#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "lago/problems.hpp"
#include "oracles.hpp"

using namespace lago;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Dense grid search followed by a simplex-free coordinate polish.
double grid_minimum(const Problem& p, int n) {
  double best = kInf;
  Vector arg;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Vector x = p.domain.lower + (p.domain.upper - p.domain.lower).cwiseProduct(
                                            vec2(double(i) / n, double(j) / n));
      const double f = p.evaluate(x).f;
      if (f < best) {
        best = f;
        arg = x;
      }
    }
  }
  double h = (p.domain.upper - p.domain.lower).maxCoeff() / n;
  while (h > 1e-10) {
    bool moved = false;
    for (int k = 0; k < 2; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        Vector y = arg;
        y[k] += sgn * h;
        y = p.domain.clip(y);
        const double f = p.evaluate(y).f;
        if (f < best) {
          best = f;
          arg = y;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

}  // namespace

TEST_CASE("sphere at the origin") {
  const auto e = make_problem("sphere", 2).evaluate(Vector::Zero(2));
  CHECK(e.f == 0.0);
  CHECK(e.grad.norm() == 0.0);
}

TEST_CASE("styblinski-tang minimum") {
  const Problem p = make_problem("styblinski-tang", 2);
  REQUIRE(p.known_min);
  CHECK(*p.known_min == doctest::Approx(-78.33198).epsilon(1e-5));
  CHECK(p.evaluate(*p.known_minimizer).f == doctest::Approx(*p.known_min).epsilon(1e-14));
  CHECK(grid_minimum(p, 400) >= *p.known_min - 1e-9);
  const Problem p5 = make_problem("styblinski-tang", 5);
  CHECK(*p5.known_min == doctest::Approx(-39.16599 * 5).epsilon(1e-5));
}

TEST_CASE("branin minimum at its three minimizers") {
  const Problem p = make_problem("branin", 2);
  const std::vector<Vector> minimizers = {vec2(-std::numbers::pi, 12.275),
                                          vec2(std::numbers::pi, 2.275),
                                          vec2(3 * std::numbers::pi, 2.475)};
  for (const auto& x : minimizers) {
    const auto e = p.evaluate(x);
    CHECK(e.f == doctest::Approx(0.39789).epsilon(1e-5));
    CHECK(e.grad.norm() < 1e-10);
  }
  CHECK(*p.known_min == doctest::Approx(grid_minimum(p, 600)).epsilon(1e-9));
}

TEST_CASE("levy is stationary at its minimizer") {
  const Problem p = make_problem("levy", 2);
  const auto e = p.evaluate(Vector::Ones(2));
  CHECK(std::abs(e.f) < 1e-14);
  CHECK(e.grad.norm() < 1e-12);
}

TEST_CASE("rosenbrock minimum") {
  const auto e = make_problem("rosenbrock", 2).evaluate(Vector::Ones(2));
  CHECK(e.f == 0.0);
  CHECK(e.grad.norm() == 0.0);
}

TEST_CASE("analytic gradients match finite differences") {
  for (const auto& info : problem_catalog()) {
    if (info.name == "pde-source-2d") continue;
    for (int d : info.dims) {
      const Problem p = make_problem(info.name, d);
      CHECK_MESSAGE(gradient_check(p, 100, 3) < 1e-5, info.name);
    }
  }
  CHECK(gradient_check(make_problem("sphere", 2), 100, 4) < 1e-9);
}

TEST_CASE("gradient check against an independent difference") {
  const Problem p = make_problem("levy", 2);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Vector x = rng.uniform_in(p.domain);
    const Vector fd = oracle::fd_gradient([&](const Vector& y) { return p.evaluate(y).f; }, x, 1e-6);
    CHECK((fd - p.evaluate(x).grad).lpNorm<Eigen::Infinity>() <
          1e-5 * std::max(1.0, fd.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("unknown problems and dimensions") {
  CHECK_THROWS_AS(make_problem("ackley", 2), ConfigError);
  CHECK_THROWS_AS(make_problem("branin", 3), ConfigError);
  CHECK_THROWS_AS(make_problem("styblinski-tang", 0), ConfigError);
}

TEST_CASE("gradient cost defaults to the dimension") {
  CHECK(make_problem("branin", 2).gradient_cost == 2);
  CHECK(make_problem("styblinski-tang", 5).gradient_cost == 5);
}

TEST_CASE("latin hypercube stratification") {
  const Box box{Vector::Zero(2), Vector::Ones(2)};
  const auto pts = latin_hypercube(box, 4, 1);
  REQUIRE(pts.size() == 4);
  for (int axis = 0; axis < 2; ++axis) {
    std::set<int> strata;
    for (const auto& x : pts) strata.insert(std::min(3, static_cast<int>(std::floor(x[axis] * 4))));
    CHECK(strata.size() == 4);
  }
  for (const auto& x : pts) CHECK(box.contains(x));
}

TEST_CASE("latin hypercube seeds differ but stay stratified") {
  const Box box{Vector::Constant(3, -5.0), Vector::Constant(3, 10.0)};
  const auto a = latin_hypercube(box, 15, 1);
  const auto b = latin_hypercube(box, 15, 2);
  bool differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) differ = differ || a[i] != b[i];
  CHECK(differ);
  for (const auto* pts : {&a, &b}) {
    for (int axis = 0; axis < 3; ++axis) {
      std::set<int> strata;
      for (const auto& x : *pts) {
        strata.insert(std::min(14, static_cast<int>(std::floor((x[axis] + 5.0) / 15.0 * 15))));
        CHECK(box.contains(x));
      }
      CHECK(strata.size() == 15);
    }
  }
  CHECK(latin_hypercube(box, 15, 1) == a);
}

TEST_CASE("evaluation ledger") {
  EvaluationLedger ledger(2);
  CHECK(ledger.units_per_evaluation() == 3);
  ledger.charge(Vector::Zero(2));
  ledger.charge(Vector::Ones(2));
  CHECK(ledger.units() == 6);
  CHECK(ledger.entries().size() == 2);
  CHECK(ledger.entries()[1].cost == 3);
}
