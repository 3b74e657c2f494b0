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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lago/lago.hpp"
#include "oracles.hpp"

using namespace lago;

namespace {

std::vector<Vector> design_with_origin(const Problem& p, std::uint64_t seed) {
  auto design = latin_hypercube(p.domain, 5 * p.dim, seed);
  design[3] = Vector::Zero(p.dim);
  return design;
}

LagoConfig base_config(long budget = 420) {
  LagoConfig c;
  c.budget = budget;
  c.seed = 7;
  return c;
}

Observation at(double x, double y) {
  Observation o;
  o.x = Vector(2);
  o.x << x, y;
  o.f = 0.0;
  o.grad = Vector::Zero(2);
  return o;
}

}  // namespace

TEST_CASE("initialization picks the archive minimizer") {
  const Problem p = make_problem("sphere", 2);
  const auto st = initialize(p, base_config(), design_with_origin(p, 1));
  CHECK(st.x_best.norm() == 0.0);
  CHECK(st.f_best == 0.0);
  REQUIRE(st.tr.has_value());
  CHECK(st.tr->center.norm() == 0.0);
}

TEST_CASE("initial hessian is the surrogate mean hessian") {
  const Problem p = make_problem("branin", 2);
  const auto st = initialize(p, base_config(), latin_hypercube(p.domain, 10, 3));
  const Matrix& H = st.tr->hessian;
  CHECK((H - H.transpose()).norm() == 0.0);
  const Vector c = st.tr->center;
  const double h = 1e-5 * p.domain.diagonal();
  Matrix fd(2, 2);
  for (int i = 0; i < 2; ++i) {
    Vector e = Vector::Zero(2);
    e[i] = h;
    fd.col(i) = (*st.model.posterior(c + e, true).mean_grad -
                 *st.model.posterior(c - e, true).mean_grad) / (2 * h);
  }
  CHECK((fd - H).norm() <= 1e-3 * std::max(1.0, H.norm()));
}

TEST_CASE("initialization charges the design and the informed candidate") {
  const Problem p = make_problem("branin", 2);
  const auto st = initialize(p, base_config(), latin_hypercube(p.domain, 10, 3));
  CHECK(st.archive.size() == 11);
  CHECK(st.ledger.units() == 33);

  LagoConfig gb = base_config();
  gb.mode = Mode::GradBo;
  const auto st2 = initialize(p, gb, latin_hypercube(p.domain, 10, 3));
  CHECK(st2.archive.size() == 10);
  CHECK_FALSE(st2.tr.has_value());
}

TEST_CASE("selection rule") {
  CHECK(select(0.5, 0.3, 1.0) == Proposal::Global);
  CHECK(select(0.5, 0.3, 2.0) == Proposal::Local);
  CHECK(select(0.0, 0.0, 1.0) == Proposal::Local);
}

TEST_CASE("lengthscale filter") {
  const std::vector<Observation> archive = {at(0, 0), at(0.05, 0), at(0.15, 0), at(0, 0), at(1, 1)};
  const std::vector<int> active = {0, 1, 2, 3, 4};
  const auto kept = apply_lengthscale_filter(archive, active, 0, 1.0, 0.1);
  CHECK(kept == std::vector<int>{0, 2, 4});
  const auto none = apply_lengthscale_filter(archive, active, 0, 1.0, 0.0);
  CHECK(none == std::vector<int>{0, 1, 2, 4});
  const auto centered = apply_lengthscale_filter(archive, {1, 2}, 0, 1.0, 0.1);
  CHECK(std::find(centered.begin(), centered.end(), 0) != centered.end());
  CHECK_THROWS_AS(apply_lengthscale_filter(archive, active, 9, 1.0, 0.1), InputError);
}

TEST_CASE("every step charges one joint evaluation") {
  const Problem p = make_problem("branin", 2);
  auto st = initialize(p, base_config(), latin_hypercube(p.domain, 10, 4));
  for (int k = 0; k < 12; ++k) {
    const long before = st.ledger.units();
    const auto rec = step(st, p, base_config());
    CHECK(st.ledger.units() - before == 3);
    CHECK(rec.cost == st.ledger.units());
  }
}

TEST_CASE("a new incumbent from a global step relocates the region") {
  const Problem p = make_problem("branin", 2);
  LagoConfig c = base_config();
  c.gamma = 1e-300;
  auto st = initialize(p, c, latin_hypercube(p.domain, 10, 5));
  bool seen = false;
  for (int k = 0; k < 30 && !seen; ++k) {
    const double before = st.f_best;
    const auto rec = step(st, p, c);
    if (rec.choice != Choice::Local && rec.f < before) {
      seen = true;
      CHECK(st.center_index == st.best_index);
      CHECK((st.tr->center - st.x_best).norm() == 0.0);
      const Matrix H = *st.model.posterior(st.tr->center, false, true).mean_hessian;
      CHECK((st.tr->hessian - H).norm() <= 1e-9 * std::max(1.0, H.norm()));
    }
  }
  CHECK(seen);
}

TEST_CASE("a tiny accepted step terminates the region") {
  const Problem p = make_problem("sphere", 2);
  LagoConfig c = base_config();
  c.eps_step = 1e3;
  auto st = initialize(p, c, latin_hypercube(p.domain, 10, 6));
  bool checked = false;
  for (int k = 0; k < 40 && !checked; ++k) {
    const auto rec = step(st, p, c);
    if (rec.choice == Choice::Local && rec.accepted) {
      CHECK(st.tr_terminated);
      const auto next = step(st, p, c);
      CHECK(next.choice == Choice::TrTerminatedGlobal);
      CHECK_FALSE(st.tr_terminated);
      checked = true;
    }
  }
  CHECK(checked);
}

TEST_CASE("early stop needs low ei and low local improvement") {
  const Problem p = make_problem("sphere", 2);
  LagoConfig c = base_config();
  auto st = initialize(p, c, latin_hypercube(p.domain, 10, 6));
  st.consecutive_low_ei = 5;
  st.last_local_improvement = 1e-13;
  CHECK(check_early_stop(st, c));
  st.last_local_improvement = 1e-3;
  CHECK_FALSE(check_early_stop(st, c));
  st.last_local_improvement = 1e-13;
  st.consecutive_low_ei = 4;
  CHECK_FALSE(check_early_stop(st, c));
}

TEST_CASE("one high ei resets the low ei counter") {
  const Problem p = make_problem("branin", 2);
  LagoConfig c = base_config();
  auto st = initialize(p, c, latin_hypercube(p.domain, 10, 7));
  st.consecutive_low_ei = 4;
  const auto rec = step(st, p, c);
  if (rec.ei >= c.eps_terminate) {
    CHECK(st.consecutive_low_ei == 0);
  } else {
    CHECK(st.consecutive_low_ei == 5);
  }
}

TEST_CASE("runs are reproducible") {
  const Problem p = make_problem("branin", 2);
  LagoConfig config = base_config();
  config.track_condition = true;
  const auto a = run(p, config);
  const auto b = run(p, config);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].x == b.trace[i].x);
    CHECK(a.trace[i].f == b.trace[i].f);
    CHECK(a.trace[i].condition_number == b.trace[i].condition_number);
  }
}

TEST_CASE("condition numbers are NaN unless tracked") {
  const Problem p = make_problem("branin", 2);
  const auto r = run(p, base_config(60));
  REQUIRE(!r.trace.empty());
  for (const auto& rec : r.trace) CHECK(std::isnan(rec.condition_number));
}

TEST_CASE("run respects the budget and tracks the incumbent") {
  const Problem p = make_problem("styblinski-tang", 2);
  const auto r = run(p, base_config(150));
  CHECK(r.units <= 150);
  double best = kInf;
  for (const auto& e : r.evaluations) best = std::min(best, e.second);
  CHECK(r.f_best == best);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].f_best <= r.trace[i - 1].f_best);
}

TEST_CASE("sphere converges") {
  const Problem p = make_problem("sphere", 2);
  const auto r = run(p, base_config());
  CHECK(r.f_best < 1e-6);
}

TEST_CASE("baseline modes") {
  const Problem p = make_problem("sphere", 2);
  LagoConfig gb = base_config(120);
  gb.mode = Mode::GradBo;
  const auto st = initialize(p, gb, latin_hypercube(p.domain, 10, 1));
  CHECK(st.model.settings().family == KernelFamily::Matern52);
  CHECK(st.model.channels() == 3);
  const auto r = run(p, gb);
  for (const auto& rec : r.trace) CHECK(rec.choice == Choice::Global);

  LagoConfig bo = base_config(120);
  bo.mode = Mode::Bo;
  const auto st_bo = initialize(p, bo, latin_hypercube(p.domain, 10, 1));
  CHECK(st_bo.model.channels() == 1);
}

TEST_CASE("configuration errors") {
  const Problem p = make_problem("sphere", 2);
  LagoConfig c = base_config();
  c.family = KernelFamily::Matern52;
  CHECK_THROWS_AS(initialize(p, c, latin_hypercube(p.domain, 10, 1)), ConfigError);
  CHECK_THROWS_AS(initialize(p, base_config(20), latin_hypercube(p.domain, 10, 1)), ConfigError);
  LagoConfig g = base_config();
  g.gamma = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK_THROWS_AS(mode_from_string("cmaes"), ConfigError);
}
