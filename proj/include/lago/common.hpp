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

#ifndef LAGO_COMMON_HPP
#define LAGO_COMMON_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lago {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Caller supplied inconsistent or out-of-range arguments.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration could not be honored (bad budget, unknown problem, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric factorization of a kernel matrix failed even after jitter.
class IllConditionedError : public NumericalError {
 public:
  IllConditionedError(const std::string& what, double condition_estimate)
      : NumericalError(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Hessian-level kernel derivatives requested from a kernel that is not smooth
/// enough to provide them.
class UnsupportedSmoothnessError : public InputError {
 public:
  using InputError::InputError;
};

/// Axis-aligned box.
struct Box {
  Vector lower;
  Vector upper;

  Eigen::Index dim() const { return lower.size(); }
  double diagonal() const { return (upper - lower).norm(); }
  bool contains(const Vector& x, double tol = 0.0) const {
    return ((x - lower).array() >= -tol).all() && ((upper - x).array() >= -tol).all();
  }
  Vector clip(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

/// 64-bit Mersenne twister with a portable uniform mapping, so that seeded
/// runs produce identical streams on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return engine_() % n; }

  Vector uniform_in(const Box& box) {
    Vector x(box.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(box.lower[i], box.upper[i]);
    return x;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lago

#endif  // LAGO_COMMON_HPP
