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

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commexp/errors.hpp"
#include "commexp/lie_basis.hpp"
#include "commexp/scheme.hpp"
#include "commexp/series.hpp"
#include "commexp/target.hpp"

namespace commexp {

/// Default tolerance on order-condition residuals.
inline constexpr double kOrderTolerance = 1e-10;

/// log of a scheme at t = 1, its basis coordinates, and per-degree round-off
/// estimates.
struct SchemeExpansion {
  TruncatedSeries<cplx> log{kMaxDegree};
  LieCoefficients<cplx> w{kMaxDegree};
  /// Friedrichs residual of the projection, index j.
  std::vector<double> lie_residual;
  /// Round-off bound on the Euclidean norm of the degree-j word vector.
  std::vector<double> noise;
};

namespace detail {

template <class S>
SchemeExpansion expand_impl(const Scheme& s) {
  const auto factors = s.factors<S>();
  const auto le = scheme_log_tracked(std::span<const Factor<S>>(factors), kMaxDegree);
  SchemeExpansion out;
  out.noise.assign(kMaxDegree + 1, 0.0);
  for (int d = 0; d <= kMaxDegree; ++d)
    out.noise[d] = le.noise_floor(d) * std::sqrt(static_cast<double>(1u << d));
  const auto proj = lie_project(le.log, standard_basis(), out.noise);
  out.lie_residual = proj.residual;
  for (int d = 0; d <= kMaxDegree; ++d) {
    const auto src = le.log.degree(d);
    auto dst = out.log.degree(d);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  }
  for (int j = 1; j <= kMaxDegree; ++j)
    for (int l = 1; l <= kLieDimension[j]; ++l) out.w(j, l) = proj.coefficients(j, l);
  return out;
}

}  // namespace detail

/// Expands a scheme through degree 7, in real arithmetic when possible.
inline SchemeExpansion expand_scheme(const Scheme& s) {
  validate(s);
  return s.is_real() ? detail::expand_impl<double>(s) : detail::expand_impl<cplx>(s);
}

struct ResidualReport {
  std::string scheme;
  int requested_order = 0;
  double tolerance = kOrderTolerance;
  LieCoefficients<cplx> w{kMaxDegree};
  /// |w_{j,l} - target_{j,l}|, index [j][l-1] for j = 1..7.
  std::vector<std::vector<double>> residuals;
  std::vector<double> max_residual;
  /// Tolerance actually applied per degree: the requested one, raised to the
  /// propagated round-off bound where that is larger.
  std::vector<double> degree_tolerance;
  std::vector<double> lie_residual;
  /// Euclidean norm of the degree-(r+1) deviation in basis coordinates.
  double leading_error_norm = 0.0;
  /// Same deviation measured on the raw word coefficients.
  double leading_word_norm = 0.0;
  /// The leading degree lies beyond the published basis table.
  bool leading_extended = false;
  int verified_order = 0;
  /// Lowest degree whose residuals exceed the tolerance, 0 when none.
  int first_failure = 0;
};

/// Compares the projected log of `scheme` against `target` at every degree
/// through 7.  verified_order is the largest r' <= 6 such that degrees 1..r'
/// all pass.
inline ResidualReport order_residuals(const Scheme& scheme, const TargetPolynomial& target, int r,
                                      double tol = kOrderTolerance) {
  if (r < 1 || r + 1 > kMaxDegree)
    throw InvalidArgument(fmt::format("order_residuals: order {} outside 1..{}", r, kMaxDegree - 1));
  const SchemeExpansion ex = expand_scheme(scheme);
  const LieBasis& basis = standard_basis();
  ResidualReport rep;
  rep.scheme = scheme.name;
  rep.requested_order = r;
  rep.tolerance = tol;
  rep.w = ex.w;
  rep.lie_residual = ex.lie_residual;
  rep.residuals.assign(kMaxDegree + 1, {});
  rep.max_residual.assign(kMaxDegree + 1, 0.0);
  rep.degree_tolerance.assign(kMaxDegree + 1, tol);
  for (int j = 1; j <= kMaxDegree; ++j) {
    for (int l = 1; l <= kLieDimension[j]; ++l) {
      const double d = std::abs(ex.w(j, l) - target.at(j, l));
      rep.residuals[j].push_back(d);
      rep.max_residual[j] = std::max(rep.max_residual[j], d);
    }
    rep.degree_tolerance[j] = std::max(tol, ex.noise[j] / basis.min_singular_value(j));
  }
  rep.verified_order = 0;
  for (int j = 1; j < kMaxDegree; ++j) {
    if (rep.max_residual[j] > rep.degree_tolerance[j]) break;
    rep.verified_order = j;
  }
  for (int j = 1; j <= r; ++j)
    if (rep.max_residual[j] > rep.degree_tolerance[j]) {
      rep.first_failure = j;
      break;
    }
  const int lead = r + 1;
  double s = 0.0;
  for (double d : rep.residuals[lead]) s += d * d;
  rep.leading_error_norm = std::sqrt(s);
  const auto tw = lie_expand(target.coefficients, basis, kMaxDegree);
  const auto tv = tw.degree(lead);
  const auto lv = ex.log.degree(lead);
  double sw = 0.0;
  for (std::size_t i = 0; i < lv.size(); ++i) sw += std::norm(lv[i] - tv[i]);
  rep.leading_word_norm = std::sqrt(sw);
  rep.leading_extended = LieBasis::is_extension(lead);
  return rep;
}

inline ResidualReport order_residuals(const Scheme& scheme, double tol = kOrderTolerance) {
  return order_residuals(scheme, scheme.target, scheme.order, tol);
}

struct EffectiveError {
  /// s * |w_{r+1} - target_{r+1}|^(1/r).
  double value = 0.0;
  /// value / s.
  double per_exponential = 0.0;
  /// per_exponential computed from the raw word norm instead of the basis.
  double word_norm_per_exponential = 0.0;
  bool extended_basis = false;
};

/// Effective error of an order-r scheme against its own target.  Throws when
/// the scheme does not verify to order r.
inline EffectiveError effective_error(const Scheme& scheme, int r, double tol = kOrderTolerance) {
  const ResidualReport rep = order_residuals(scheme, scheme.target, r, tol);
  if (rep.verified_order < r)
    throw InvalidArgument(fmt::format("effective_error: {} verifies only to order {}, not {}",
                                      scheme.name, rep.verified_order, r));
  const double s = static_cast<double>(scheme.size());
  EffectiveError e;
  e.per_exponential = std::pow(rep.leading_error_norm, 1.0 / r);
  e.value = s * e.per_exponential;
  e.word_norm_per_exponential = std::pow(rep.leading_word_norm, 1.0 / r);
  e.extended_basis = rep.leading_extended;
  return e;
}

inline EffectiveError effective_error(const Scheme& scheme) {
  return effective_error(scheme, scheme.order);
}

// Counter-palindromic identities.

struct IdentityCheck {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// The ten linear relations forced on w_{j,l} by a counter-palindromic pattern;
/// the upper sign belongs to the positive pattern.  Unlike w51/w56 and w52/w55,
/// the w53/w54 pair takes the lower sign for the positive pattern.
inline std::vector<IdentityCheck> cp_identities(const LieCoefficients<cplx>& w, CpSign sign,
                                                double tol = kOrderTolerance) {
  const double p = sign_value(sign);
  const char* pm = sign == CpSign::Positive ? "+" : "-";
  const char* mp = sign == CpSign::Positive ? "-" : "+";
  std::vector<IdentityCheck> out;
  const auto add = [&](std::string text, cplx lhs, cplx rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    out.push_back({std::move(text), std::abs(lhs), std::abs(rhs),
                   std::abs(lhs - rhs) <= tol * scale});
  };
  add(fmt::format("w11 = {}w12", pm), w(1, 1), p * w(1, 2));
  add(fmt::format("w31 = {}w32", mp), w(3, 1), -p * w(3, 2));
  add("w41 = -w43", w(4, 1), -w(4, 3));
  add(fmt::format("w51 = {}w56", pm), w(5, 1), p * w(5, 6));
  add(fmt::format("w52 = {}w55", pm), w(5, 2), p * w(5, 5));
  add(fmt::format("w53 = {}w54", mp), w(5, 3), -p * w(5, 4));
  add("w61 = -w69", w(6, 1), -w(6, 9));
  add("w62 = -w68", w(6, 2), -w(6, 8));
  add("w63 = -w67", w(6, 3), -w(6, 7));
  add("w64 = 3(w65 + w66)", w(6, 4), 3.0 * (w(6, 5) + w(6, 6)));
  return out;
}

inline std::vector<IdentityCheck> cp_identities(const Scheme& scheme, CpSign sign,
                                                double tol = kOrderTolerance) {
  return cp_identities(expand_scheme(scheme).w, sign, tol);
}

/// Pattern whose order conditions are counted.
enum class Pattern { PCP, NCP, General };

struct ConditionCounts {
  /// Independent components per degree, index j = 1..6.
  std::array<int, kTableDegree + 1> per_degree{};
  /// Cumulative counts for r = 3..6, index r.
  std::array<int, kTableDegree + 1> cumulative{};
};

/// Counts linearly independent coefficient functions w_{j,l} by sampling
/// random coefficient vectors and taking the numerical rank per degree.
inline ConditionCounts condition_counts(Pattern pattern, int half_length = 8, int samples = 40,
                                        std::uint64_t seed = 2024) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<LieCoefficients<cplx>> ws;
  for (int k = 0; k < samples; ++k) {
    std::vector<cplx> half(half_length);
    for (auto& c : half) c = uni(rng);
    Scheme s;
    s.name = "sample";
    if (pattern == Pattern::General) {
      for (int i = 0; i < 2 * half_length; ++i)
        s.slots.push_back({i % 2 == 0 ? Generator::B : Generator::A, uni(rng)});
    } else {
      s.slots = cp_expand(half, pattern == Pattern::PCP ? CpSign::Positive : CpSign::Negative);
    }
    ws.push_back(expand_scheme(s).w);
  }
  ConditionCounts out;
  int running = 0;
  for (int j = 1; j <= kTableDegree; ++j) {
    Eigen::MatrixXd m(samples, kLieDimension[j]);
    for (int k = 0; k < samples; ++k)
      for (int l = 1; l <= kLieDimension[j]; ++l) m(k, l - 1) = ws[k](j, l).real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * sv(0)) ++rank;
    out.per_degree[j] = rank;
    running += rank;
    out.cumulative[j] = running;
  }
  return out;
}

// Newton refinement.

struct RefineOptions {
  double target_residual = 1e-13;
  int max_iterations = 50;
  double initial_residual_limit = 1e-2;
};

struct RefineResult {
  Scheme scheme;
  /// Max-norm of the order-condition residual vector at exit.
  double residual = 0.0;
  int iterations = 0;
  int active_conditions = 0;
};

namespace detail {

/// Parameter vector <-> scheme.  CP schemes are parametrized by c_1..c_m
/// with c_0 fixed by closure; other schemes by their slot coefficients.
struct Parametrization {
  Scheme base;
  bool cp = false;

  std::vector<double> values() const {
    std::vector<double> v;
    if (cp) {
      for (std::size_t i = 1; i < base.half.size(); ++i) v.push_back(base.half[i].real());
    } else {
      for (const auto& s : base.slots) v.push_back(s.coefficient.real());
    }
    return v;
  }

  Scheme build(const std::vector<double>& v) const {
    Scheme s = base;
    if (cp) {
      const CpSign sign = base.cp_sign();
      std::vector<cplx> tail(v.begin(), v.end());
      std::vector<cplx> half{cp_closure(tail, sign)};
      half.insert(half.end(), tail.begin(), tail.end());
      s.slots = cp_expand(half, sign);
      s.half = std::move(half);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) s.slots[i].coefficient = v[i];
    }
    return s;
  }
};

inline Eigen::VectorXd condition_vector(const Scheme& s, const TargetPolynomial& t, int order) {
  const SchemeExpansion ex = expand_scheme(s);
  int n = 0;
  for (int j = 1; j <= order; ++j) n += kLieDimension[j];
  Eigen::VectorXd f(n);
  int k = 0;
  for (int j = 1; j <= order; ++j)
    for (int l = 1; l <= kLieDimension[j]; ++l) f(k++) = (ex.w(j, l) - t.at(j, l)).real();
  return f;
}

inline Eigen::MatrixXd jacobian(const Parametrization& p, const std::vector<double>& v,
                                const std::vector<int>& cols, const TargetPolynomial& t,
                                int order, Eigen::Index rows) {
  Eigen::MatrixXd jac(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(v[cols[c]]));
    auto vp = v;
    auto vm = v;
    vp[cols[c]] += h;
    vm[cols[c]] -= h;
    jac.col(static_cast<Eigen::Index>(c)) =
        (condition_vector(p.build(vp), t, order) - condition_vector(p.build(vm), t, order)) /
        (2.0 * h);
  }
  return jac;
}

inline int numerical_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  return rank;
}

}  // namespace detail

/// Newton iteration on the order conditions of degrees 1..order with a
/// central-difference Jacobian and minimum-norm steps.  `free_slots` indexes
/// the parameters allowed to move: half-pattern positions 1..m for CP schemes
/// (c_0 follows from closure), slot positions 0..s-1 otherwise.  An empty set
/// frees every parameter.
inline RefineResult refine(const Scheme& scheme, const TargetPolynomial& target,
                           std::vector<int> free_slots = {}, RefineOptions opt = {}) {
  if (!scheme.is_real()) throw InvalidArgument("refine: real coefficients required");
  const int order = scheme.order;
  if (order + 1 > kMaxDegree) throw InvalidArgument("refine: order too high");
  detail::Parametrization par{scheme, scheme.is_cp() && !scheme.half.empty()};
  std::vector<double> v = par.values();
  const int offset = par.cp ? 1 : 0;
  const int n_params = static_cast<int>(v.size());
  if (free_slots.empty())
    for (int i = 0; i < n_params; ++i) free_slots.push_back(i + offset);
  std::vector<int> cols;
  for (int i : free_slots) {
    if (i - offset < 0 || i - offset >= n_params)
      throw InvalidArgument(fmt::format("refine: free index {} out of range", i));
    cols.push_back(i - offset);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  Eigen::VectorXd f = detail::condition_vector(par.build(v), target, order);
  std::vector<int> all(n_params);
  for (int i = 0; i < n_params; ++i) all[i] = i;
  const int active = detail::numerical_rank(detail::jacobian(par, v, all, target, order, f.size()));
  if (static_cast<int>(cols.size()) < active)
    throw InvalidArgument(fmt::format(
        "refine: {} free coefficients cannot satisfy {} active order conditions", cols.size(), active));
  const double initial = f.cwiseAbs().maxCoeff();
  if (!(initial < opt.initial_residual_limit))
    throw InvalidArgument(fmt::format("refine: initial residual {:.3g} is not small", initial));

  RefineResult res;
  res.active_conditions = active;
  double r = initial;
  int it = 0;
  while (r > opt.target_residual && it < opt.max_iterations) {
    const Eigen::MatrixXd jac = detail::jacobian(par, v, cols, target, order, f.size());
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    cod.setThreshold(1e-10);
    if (cod.rank() < active) throw ConvergenceFailure("refine: singular Jacobian");
    const Eigen::VectorXd step = cod.solve(-f);
    for (std::size_t c = 0; c < cols.size(); ++c) v[cols[c]] += step(static_cast<Eigen::Index>(c));
    f = detail::condition_vector(par.build(v), target, order);
    r = f.cwiseAbs().maxCoeff();
    ++it;
    if (!std::isfinite(r) || r > 10.0 * std::max(initial, opt.initial_residual_limit))
      throw ConvergenceFailure("refine: Newton iteration diverged");
  }
  if (r > opt.target_residual)
    throw ConvergenceFailure(fmt::format("refine: residual {:.3g} after {} iterations", r, it));
  res.scheme = par.build(v);
  res.residual = r;
  res.iterations = it;
  return res;
}

inline RefineResult refine(const Scheme& scheme, std::vector<int> free_slots = {},
                           RefineOptions opt = {}) {
  return refine(scheme, scheme.target, std::move(free_slots), opt);
}

// Free-parameter optimization.

struct OptimizeResult {
  double parameter = 0.0;
  double effective_error = 0.0;
  double per_exponential = 0.0;
  /// The objective did not vary over the grid.
  bool flat = false;
  int evaluations = 0;
};

/// Grid scan of E^(r+1) over [lo, hi] followed by golden-section refinement
/// around the best grid point.  Every grid point must verify to order r.
inline OptimizeResult optimize_free_parameter(const std::function<Scheme(double)>& family, int r,
                                              double lo, double hi, int grid = 64) {
  if (!(lo < hi)) throw InvalidArgument("optimize_free_parameter: empty range");
  if (grid < 3) throw InvalidArgument("optimize_free_parameter: grid needs at least 3 points");
  OptimizeResult out;
  const auto objective = [&](double x) {
    ++out.evaluations;
    return effective_error(family(x), r).value;
  };
  std::vector<double> xs(grid);
  std::vector<double> fs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = lo + (hi - lo) * i / (grid - 1);
    const Scheme s = family(xs[i]);
    const ResidualReport rep = order_residuals(s, s.target, r);
    if (rep.verified_order < r)
      throw InvalidArgument(fmt::format(
          "optimize_free_parameter: family loses order {} at parameter {:.17g}", r, xs[i]));
    fs[i] = objective(xs[i]);
  }
  const auto best = std::min_element(fs.begin(), fs.end()) - fs.begin();
  const double fmin = fs[best];
  const double fmax = *std::max_element(fs.begin(), fs.end());
  if (fmax - fmin <= 1e-12 * std::max(1.0, std::abs(fmin))) {
    out.flat = true;
    out.parameter = xs[best];
    out.effective_error = fmin;
    out.per_exponential = fmin / static_cast<double>(family(xs[best]).size());
    return out;
  }
  double a = xs[std::max<std::ptrdiff_t>(best - 1, 0)];
  double b = xs[std::min<std::ptrdiff_t>(best + 1, grid - 1)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = objective(x2);
    }
  }
  out.parameter = f1 < f2 ? x1 : x2;
  out.effective_error = std::min(f1, f2);
  if (fmin < out.effective_error) {
    out.parameter = xs[best];
    out.effective_error = fmin;
  }
  out.per_exponential = out.effective_error / static_cast<double>(family(out.parameter).size());
  return out;
}

}  // namespace commexp
