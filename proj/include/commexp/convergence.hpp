// Copyright 2026 The commexp Authors
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

#include <cmath>
#include <utility>
#include <vector>

#include "commexp/errors.hpp"
#include "commexp/matrix.hpp"
#include "commexp/scheme.hpp"
#include "commexp/target.hpp"

namespace commexp {

/// Errors outside this window are excluded from slope fits.
inline constexpr double kSlopeErrorFloor = 1e-14;
inline constexpr double kSlopeErrorCeiling = 1e-1;

struct SamplePoint {
  double t = 0.0;
  double error = 0.0;
};

/// Least-squares slope of log(error) against log(t) over the usable points.
inline double slope_fit(const std::vector<SamplePoint>& points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& p : points) {
    if (!(p.t > 0.0) || p.error < kSlopeErrorFloor || p.error > kSlopeErrorCeiling) continue;
    const double x = std::log(p.t);
    const double y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw InvalidArgument("slope_fit: fewer than 3 usable points");
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("slope_fit: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

/// n points spaced evenly in log t over [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return g;
}

/// Nine points in [2^-7, 2^-3].
inline std::vector<double> default_order_grid() { return log_grid(0x1.0p-7, 0x1.0p-3, 9); }

/// One-step errors |U(t) - exp(target(t))|_2.
inline std::vector<SamplePoint> single_step_errors(const Scheme& scheme, const TargetPolynomial& target,
                                                   const OperatorPair& pair,
                                                   const std::vector<double>& t_grid) {
  std::vector<SamplePoint> out;
  for (double t : t_grid)
    out.push_back({t, two_norm(evaluate_scheme(scheme, pair, t) - target_matrix(target, pair, t))});
  return out;
}

/// Single-step log-log slope; an order-r scheme gives about r + 1.
inline double empirical_order(const Scheme& scheme, const TargetPolynomial& target,
                              const OperatorPair& pair,
                              const std::vector<double>& t_grid = default_order_grid()) {
  return slope_fit(single_step_errors(scheme, target, pair, t_grid));
}

inline double empirical_order(const Scheme& scheme, const OperatorPair& pair,
                              const std::vector<double>& t_grid = default_order_grid()) {
  return empirical_order(scheme, scheme.target, pair, t_grid);
}

}  // namespace commexp
