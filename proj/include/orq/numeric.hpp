// Copyright 2026 The orq Authors
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

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace orq {

using Vec = Eigen::VectorXd;

/// Central-difference gradient of `f` at `x`.
template <typename F>
Vec central_difference_gradient(F&& f, const Vec& x, double step) {
  Vec g(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    probe[i] = xi + step;
    const double fp = f(probe);
    probe[i] = xi - step;
    const double fm = f(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2 * step);
  }
  return g;
}

struct MinimizeOptions {
  int max_iters = 500;
  /// Stop once the objective is at or below this value.
  double target = 1e-15;
  double grad_tol = 1e-13;
  double armijo = 1e-4;
};

struct MinimizeResult {
  Vec x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

/// Quasi-Newton descent with backtracking (Armijo) line search.
///
/// `value(x)` is the objective; `gradient(x)` supplies its gradient (typically
/// a finite-difference estimate). The inverse-Hessian estimate is reset to
/// steepest descent whenever it stops producing a descent direction.
template <typename Value, typename Gradient>
MinimizeResult minimize(Value&& value, Gradient&& gradient, Vec x, const MinimizeOptions& opt = {}) {
  const Eigen::Index n = x.size();
  double fx = value(x);
  Vec g = gradient(x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    if (fx <= opt.target || g.lpNorm<Eigen::Infinity>() < opt.grad_tol) break;
    Vec d = -hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0)) {
      hinv.setIdentity();
      fresh = true;
      d = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    double ft = value(x + t * d);
    while (!(ft <= fx + opt.armijo * t * slope) && t > 1e-20) {
      t *= 0.5;
      ft = value(x + t * d);
    }
    if (!(ft <= fx + opt.armijo * t * slope)) {
      if (fresh) break;
      hinv.setIdentity();
      fresh = true;
      continue;
    }
    const Vec s = t * d;
    x += s;
    const Vec g_new = gradient(x);
    const Vec y = g_new - g;
    const double ys = y.dot(s);
    if (ys > 1e-18) {
      if (fresh) {
        hinv *= ys / y.squaredNorm();
        fresh = false;
      }
      const double rho = 1.0 / ys;
      const Vec hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
    }
    fx = ft;
    g = g_new;
  }
  return {std::move(x), fx, it};
}

}  // namespace orq
