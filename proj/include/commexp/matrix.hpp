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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "commexp/errors.hpp"
#include "commexp/lie_basis.hpp"
#include "commexp/scheme.hpp"
#include "commexp/target.hpp"

namespace commexp {

using DenseMatrix = Eigen::MatrixXcd;

namespace detail {

inline void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entries");
}

}  // namespace detail

/// Scaling and squaring: M is scaled by 2^-s until its Frobenius norm is at
/// most 1/2, a degree-13 Taylor polynomial is evaluated, and the result is
/// squared s times.
inline DenseMatrix expm(const DenseMatrix& m) {
  detail::require_finite(m, "expm");
  if (m.rows() != m.cols()) throw InvalidArgument("expm: matrix must be square");
  const double norm = m.norm();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const DenseMatrix x = m / std::ldexp(1.0, s);
  const auto id = DenseMatrix::Identity(m.rows(), m.cols());
  DenseMatrix r = id;
  for (int k = 13; k >= 1; --k) r = id + x * r / static_cast<double>(k);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

/// Power-iteration tolerance on the relative change of the largest
/// eigenvalue of M^H M.
inline constexpr double kNormTolerance = 1e-13;
inline constexpr int kNormIterationCap = 10000;

namespace detail {

/// Largest eigenvalue of H = M^H M from the start vector x, or nullopt when
/// the iterate collapses to zero.
inline std::optional<double> power_iteration(const DenseMatrix& m, Eigen::VectorXcd x) {
  x.normalize();
  double lambda = 0.0;
  double prev_delta = 0.0;
  for (int it = 0; it < kNormIterationCap; ++it) {
    Eigen::VectorXcd y = m.adjoint() * (m * x);
    const double rq = x.dot(y).real();
    const double ny = y.norm();
    if (ny == 0.0) return std::nullopt;
    const double delta = std::abs(rq - lambda);
    lambda = rq;
    x = y / ny;
    if (it > 0) {
      // Geometric tail estimate of the remaining increase.
      const double q = prev_delta > 0.0 ? delta / prev_delta : 0.0;
      const double tail = q < 1.0 ? delta * q / (1.0 - q) : std::numeric_limits<double>::infinity();
      if (delta <= kNormTolerance * lambda && tail <= kNormTolerance * lambda) return lambda;
    }
    prev_delta = delta;
  }
  throw ConvergenceFailure("two_norm: iteration cap reached");
}

}  // namespace detail

/// Largest singular value by power iteration on M^H M.  Two fixed start
/// vectors are used, the all-ones vector and a generic complex one, and the
/// larger estimate wins; a single start converges to the wrong eigenvalue
/// when it happens to be an eigenvector, as the all-ones vector is for
/// [[2, -1], [-1, 2]].
inline double two_norm(const DenseMatrix& m) {
  detail::require_finite(m, "two_norm");
  if (m.size() == 0) return 0.0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::VectorXcd generic(m.cols());
  for (Eigen::Index i = 0; i < generic.size(); ++i)
    generic(i) = std::complex<double>(1.0 + 0.5 * std::sin(1.0 + i), 0.25 * std::cos(2.0 + i));
  const auto a = detail::power_iteration(m, Eigen::VectorXcd::Ones(m.cols()));
  const auto b = detail::power_iteration(m, generic);
  if (!a && !b) throw ConvergenceFailure("two_norm: iteration stagnated from both start vectors");
  return std::sqrt(std::max({0.0, a.value_or(0.0), b.value_or(0.0)}));
}

struct OperatorPair {
  DenseMatrix a;
  DenseMatrix b;
  std::string label;
  std::optional<std::uint64_t> seed;

  const DenseMatrix& operator[](Generator g) const { return g == Generator::A ? a : b; }
  Eigen::Index dim() const { return a.rows(); }
};

/// A = -i sigma_x, B = -i sigma_z.
inline OperatorPair make_pauli_pair() {
  const cplx i{0.0, 1.0};
  DenseMatrix a(2, 2);
  DenseMatrix b(2, 2);
  a << 0.0, -i, -i, 0.0;
  b << -i, 0.0, 0.0, i;
  return {a, b, "pauli", std::nullopt};
}

/// Standard normal samples from a seeded 64-bit Mersenne Twister through the
/// Box-Muller transform.  Uniforms use the top 53 bits, mapped to (0, 1].
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

 private:
  double uniform() { return 1.0 - static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// d x d real Gaussian matrices, A filled row by row before B, each divided
/// by its spectral norm.
inline OperatorPair make_random_pair(int d, std::uint64_t seed) {
  if (d < 2) throw InvalidArgument("make_random_pair: dimension must be at least 2");
  NormalStream normal(seed);
  DenseMatrix a(d, d);
  DenseMatrix b(d, d);
  for (DenseMatrix* m : {&a, &b})
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) (*m)(r, c) = normal.next();
  a /= two_norm(a);
  b /= two_norm(b);
  return {a, b, "random" + std::to_string(d), seed};
}

/// "pauli" or "random:<d>".
inline OperatorPair make_pair(const std::string& kind, std::uint64_t seed = 1) {
  if (kind == "pauli") return make_pauli_pair();
  if (kind.rfind("random:", 0) == 0) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(kind.substr(7), &used);
      if (used == kind.size() - 7) return make_random_pair(d, seed);
    } catch (const std::logic_error&) {
    }
  }
  throw InvalidArgument("unknown operator pair: " + kind);
}

/// Left-to-right product of expm(c t X) over the slots; zero slots skipped.
inline DenseMatrix evaluate_scheme(const Scheme& scheme, const OperatorPair& pair, double t) {
  if (pair.a.rows() != pair.b.rows() || pair.a.rows() != pair.a.cols())
    throw InvalidArgument("evaluate_scheme: operator dimensions differ");
  DenseMatrix u = DenseMatrix::Identity(pair.dim(), pair.dim());
  for (const auto& slot : scheme.slots) {
    if (slot.coefficient == cplx{}) continue;
    u = u * expm((slot.coefficient * t) * pair[slot.generator]);
  }
  return u;
}

/// Matrix realization of sum_j t^j sum_l w_{j,l} E_{j,l}.
inline DenseMatrix lie_matrix(const TargetPolynomial& target, const OperatorPair& pair, double t) {
  const LieBasis& basis = standard_basis();
  const Eigen::Index d = pair.dim();
  if (pair.b.rows() != d) throw InvalidArgument("target_matrix: operator dimensions differ");
  const int top = target.degree_range().second;
  std::vector<std::vector<DenseMatrix>> e(top + 1);
  DenseMatrix out = DenseMatrix::Zero(d, d);
  for (int j = 1; j <= top; ++j) {
    for (int l = 1; l <= kLieDimension[j]; ++l) {
      const BasisElement& el = basis.element(j, l);
      if (j == 1) {
        e[j].push_back(pair[el.left]);
      } else {
        const DenseMatrix& x = pair[el.left];
        const DenseMatrix& y = e[j - 1][el.parent - 1];
        e[j].push_back(static_cast<double>(el.sign) * (x * y - y * x));
      }
      const cplx c = target.at(j, l);
      if (c != cplx{}) out += (c * std::pow(t, j)) * e[j].back();
    }
  }
  return out;
}

inline DenseMatrix target_matrix(const TargetPolynomial& target, const OperatorPair& pair,
                                 double t) {
  return expm(lie_matrix(target, pair, t));
}

/// M^n by binary powering.
inline DenseMatrix matrix_power(DenseMatrix m, long n) {
  if (n < 0) throw InvalidArgument("matrix_power: negative exponent");
  DenseMatrix r = DenseMatrix::Identity(m.rows(), m.cols());
  while (n > 0) {
    if (n & 1) r = r * m;
    n >>= 1;
    if (n > 0) m = m * m;
  }
  return r;
}

}  // namespace commexp
