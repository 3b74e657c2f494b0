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

#include "lago/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lago {

SimplexResult nelder_mead(const std::function<double(const Vector&)>& objective,
                          const std::function<Vector(const Vector&)>& project, const Vector& start,
                          const Vector& initial_step, const SimplexOptions& options) {
  const Eigen::Index n = start.size();
  const auto np1 = static_cast<std::size_t>(n + 1);
  std::vector<Vector> pts(np1);
  std::vector<double> vals(np1);
  int evals = 0;

  auto eval = [&](const Vector& x) {
    ++evals;
    const double v = objective(x);
    return std::isnan(v) ? kInf : v;
  };

  pts[0] = project(start);
  vals[0] = eval(pts[0]);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector p = pts[0];
    p[i] += initial_step[i];
    p = project(p);
    if ((p - pts[0]).norm() == 0.0) {
      p = pts[0];
      p[i] -= initial_step[i];
      p = project(p);
    }
    pts[static_cast<std::size_t>(i + 1)] = p;
    vals[static_cast<std::size_t>(i + 1)] = eval(p);
  }

  std::vector<std::size_t> order(np1);
  while (evals < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    const double spread = vals[worst] - vals[best];
    double diameter = 0.0;
    for (const auto& p : pts) diameter = std::max(diameter, (p - pts[best]).norm());
    if (diameter <= options.x_tolerance) break;
    if (std::isfinite(spread) && spread <= options.f_tolerance * (1.0 + std::abs(vals[best]))) {
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (std::size_t i = 0; i < np1; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);

    const Vector xr = project(centroid + (centroid - pts[worst]));
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Vector xe = project(centroid + 2.0 * (centroid - pts[worst]));
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Vector xc = outside ? project(centroid + 0.5 * (xr - centroid))
                              : project(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < np1; ++i) {
      if (i == best) continue;
      pts[i] = project(pts[best] + 0.5 * (pts[i] - pts[best]));
      vals[i] = eval(pts[i]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(std::distance(vals.begin(), it));
  return {pts[idx], vals[idx], evals};
}

}  // namespace lago
