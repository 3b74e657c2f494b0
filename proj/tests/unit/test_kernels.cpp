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

#include "doctest.h"
#include "lago/kernels.hpp"
#include "oracles.hpp"

using namespace lago;

namespace {

Vector random_point(Rng& rng, int d, double lo, double hi) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("kernel value at zero distance equals the scale") {
  const Vector x = Vector::Constant(3, 0.3);
  for (auto fam : {KernelFamily::Matern52, KernelFamily::Matern72}) {
    CHECK(kernel_value(x, x, {0.7, 1.0}, fam) == doctest::Approx(1.0));
    CHECK(kernel_value(x, x, {0.7, 2.5}, fam) == doctest::Approx(2.5));
  }
}

TEST_CASE("matern72 at one lengthscale") {
  const double s7 = std::sqrt(7.0);
  const double expected = (1 + s7 + 14.0 / 5 + 7 * s7 / 15) * std::exp(-s7);
  Vector x(2), xp(2);
  x << 0.0, 0.0;
  xp << 0.6, 0.8;
  CHECK(kernel_value(x, xp, {1.0, 1.0}, KernelFamily::Matern72) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.5453).epsilon(1e-3));
}

TEST_CASE("kernel value is symmetric") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vector a = random_point(rng, 3, -2, 2), b = random_point(rng, 3, -2, 2);
    for (auto fam : {KernelFamily::Matern52, KernelFamily::Matern72}) {
      CHECK(kernel_value(a, b, {0.9, 1.3}, fam) == kernel_value(b, a, {0.9, 1.3}, fam));
    }
  }
}

TEST_CASE("joint block at zero distance") {
  const Vector x = Vector::Constant(2, 0.1);
  const KernelHyper h{0.5, 2.0};
  const Matrix blk = kernel_joint_block(x, x, h, KernelFamily::Matern72);
  CHECK(blk.col(0).tail(2).norm() == 0.0);
  CHECK(blk.row(0).tail(2).norm() == 0.0);
  const Matrix expected = (7.0 * h.scale / (5.0 * h.lengthscale * h.lengthscale)) *
                          Matrix::Identity(2, 2);
  CHECK((blk.bottomRightCorner(2, 2) - expected).norm() < 1e-12);

  const Matrix blk52 = kernel_joint_block(x, x, h, KernelFamily::Matern52);
  const Matrix expected52 =
      (5.0 * h.scale / (3.0 * h.lengthscale * h.lengthscale)) * Matrix::Identity(2, 2);
  CHECK((blk52.bottomRightCorner(2, 2) - expected52).norm() < 1e-12);
}

TEST_CASE("joint block matches finite differences") {
  Rng rng(5);
  for (auto fam : {KernelFamily::Matern52, KernelFamily::Matern72}) {
    for (int t = 0; t < 50; ++t) {
      const int d = 1 + static_cast<int>(rng.index(3));
      const KernelHyper h{rng.uniform(0.3, 2.0), rng.uniform(0.5, 3.0)};
      const Vector a = random_point(rng, d, -1, 1), b = random_point(rng, d, -1, 1);
      const auto err = oracle::joint_block_fd_error(a, b, h, fam);
      CHECK(err.first_order < 1e-6);
      CHECK(err.second_order < 1e-4);
    }
  }
}

TEST_CASE("hessian row matches finite differences") {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + static_cast<int>(rng.index(3));
    const KernelHyper h{rng.uniform(0.3, 2.0), rng.uniform(0.5, 3.0)};
    const Vector a = random_point(rng, d, -1, 1), b = random_point(rng, d, -1, 1);
    CHECK(oracle::hessian_row_fd_error(a, b, h, KernelFamily::Matern72) < 1e-4);
  }
}

TEST_CASE("hessian row at zero distance") {
  const Vector x = Vector::Constant(3, -0.4);
  const KernelHyper h{0.8, 1.7};
  const auto row = kernel_hessian_row(x, x, h, KernelFamily::Matern72);
  REQUIRE(row.size() == 4);
  const Matrix expected =
      -(7.0 * h.scale / (5.0 * h.lengthscale * h.lengthscale)) * Matrix::Identity(3, 3);
  CHECK((row[0] - expected).norm() < 1e-12);
  for (std::size_t m = 1; m < row.size(); ++m) CHECK(row[m].norm() == 0.0);
}

TEST_CASE("derivative blocks scale linearly with the output variance") {
  Rng rng(9);
  const Vector a = random_point(rng, 2, -1, 1), b = random_point(rng, 2, -1, 1);
  const KernelHyper h1{0.6, 1.0}, h3{0.6, 3.0};
  const auto r1 = kernel_hessian_row(a, b, h1, KernelFamily::Matern72);
  const auto r3 = kernel_hessian_row(a, b, h3, KernelFamily::Matern72);
  for (std::size_t m = 0; m < r1.size(); ++m) CHECK((r3[m] - 3.0 * r1[m]).norm() < 1e-12);
  const Matrix b1 = kernel_joint_block(a, b, h1, KernelFamily::Matern72);
  const Matrix b3 = kernel_joint_block(a, b, h3, KernelFamily::Matern72);
  CHECK((b3 - 3.0 * b1).norm() < 1e-12);
}

TEST_CASE("matern52 has no hessian row") {
  const Vector x = Vector::Zero(2);
  CHECK_THROWS_AS(kernel_hessian_row(x, x, {1.0, 1.0}, KernelFamily::Matern52),
                  UnsupportedSmoothnessError);
}

TEST_CASE("invalid hyperparameters are rejected") {
  const Vector x = Vector::Zero(2);
  CHECK_THROWS_AS(kernel_value(x, x, {0.0, 1.0}, KernelFamily::Matern72), InputError);
  CHECK_THROWS_AS(kernel_value(x, x, {1.0, -1.0}, KernelFamily::Matern72), InputError);
  CHECK_THROWS_AS(kernel_value(x, Vector::Zero(3), {1.0, 1.0}, KernelFamily::Matern72),
                  InputError);
}

TEST_CASE("family names round trip") {
  for (auto fam : {KernelFamily::Matern52, KernelFamily::Matern72}) {
    CHECK(kernel_family_from_string(to_string(fam)) == fam);
  }
  CHECK_THROWS(kernel_family_from_string("rbf"));
}
