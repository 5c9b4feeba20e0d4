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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "commexp/catalog.hpp"
#include "commexp/convergence.hpp"
#include "commexp/matrix.hpp"

using namespace commexp;

namespace {

const cplx I{0.0, 1.0};

DenseMatrix random_matrix(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> n;
  DenseMatrix m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(n(rng), n(rng));
  return m * (scale / m.norm());
}

double svd_norm(const DenseMatrix& m) {
  return Eigen::JacobiSVD<DenseMatrix>(m).singularValues()(0);
}

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Expm, Zero) {
  EXPECT_EQ(max_abs(expm(DenseMatrix::Zero(3, 3)) - DenseMatrix::Identity(3, 3)), 0.0);
}

TEST(Expm, PauliRotation) {
  const double th = 0.7;
  DenseMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const DenseMatrix want = std::cos(th) * DenseMatrix::Identity(2, 2) - I * std::sin(th) * sx;
  EXPECT_LT(max_abs(expm(-I * th * sx) - want), 1e-15);
}

TEST(Expm, MatchesEigenMatrixFunctions) {
  std::mt19937_64 rng(6);
  for (double scale : {0.1, 1.0, 5.0, 20.0, 50.0}) {
    const DenseMatrix m = random_matrix(rng, 8, scale);
    const DenseMatrix want = m.exp();
    EXPECT_LT(max_abs(expm(m) - want), 1e-12 * std::max(1.0, max_abs(want))) << scale;
  }
}

TEST(Expm, RejectsNonFinite) {
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(m), InvalidArgument);
}

TEST(TwoNorm, SimpleCases) {
  EXPECT_DOUBLE_EQ(two_norm(DenseMatrix::Identity(2, 2)), 1.0);
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0 * I;
  EXPECT_NEAR(two_norm(d), 4.0, 1e-13);
  EXPECT_EQ(two_norm(DenseMatrix::Zero(3, 3)), 0.0);
}

TEST(TwoNorm, OnesEigenvectorOfSmallerEigenvalue) {
  DenseMatrix m(2, 2);
  m << 2, -1, -1, 2;
  EXPECT_NEAR(two_norm(m), 3.0, 1e-12);
}

TEST(TwoNorm, MatchesSvd) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix m = random_matrix(rng, 1 + trial % 16, 1.0 + trial);
    EXPECT_NEAR(two_norm(m), svd_norm(m), 1e-10 * svd_norm(m));
  }
}

TEST(Pairs, Pauli) {
  const OperatorPair p = make_pauli_pair();
  DenseMatrix a(2, 2), b(2, 2);
  a << 0, -I, -I, 0;
  b << -I, 0, 0, I;
  EXPECT_EQ(p.a, a);
  EXPECT_EQ(p.b, b);
  EXPECT_EQ(make_pair("pauli").a, a);
}

TEST(Pairs, RandomNormalizedAndDeterministic) {
  const OperatorPair p = make_random_pair(16, 1);
  EXPECT_EQ(p.dim(), 16);
  EXPECT_NEAR(two_norm(p.a), 1.0, 1e-12);
  EXPECT_NEAR(two_norm(p.b), 1.0, 1e-12);
  EXPECT_NEAR(svd_norm(p.a), 1.0, 1e-12);
  EXPECT_EQ(p.a.imag().cwiseAbs().maxCoeff(), 0.0);
  const OperatorPair q = make_pair("random:16", 1);
  EXPECT_EQ(p.a, q.a);
  EXPECT_EQ(p.b, q.b);
  EXPECT_NE(make_random_pair(16, 2).a, p.a);
  EXPECT_THROW(make_pair("gaussian"), InvalidArgument);
  EXPECT_THROW(make_random_pair(1, 1), InvalidArgument);
}

TEST(Evaluate, GroupCommutatorProduct) {
  const OperatorPair p = make_pauli_pair();
  const double t = 0.3;
  const DenseMatrix want = expm(-t * p.b) * expm(t * p.a) * expm(t * p.b) * expm(-t * p.a);
  EXPECT_LT(max_abs(evaluate_scheme(u22(), p, t) - want), 1e-15);
}

TEST(Evaluate, ZeroSlotsAndNegatedTime) {
  const OperatorPair p = make_random_pair(4, 3);
  Scheme s = ncp10_4();
  Scheme padded = s;
  padded.slots.insert(padded.slots.begin() + 3, ExponentSlot{Generator::A, 0.0});
  EXPECT_LT(max_abs(evaluate_scheme(padded, p, 0.4) - evaluate_scheme(s, p, 0.4)), 1e-14);
  EXPECT_LT(max_abs(evaluate_scheme(negate_time(s), p, 0.4) - evaluate_scheme(s, p, -0.4)), 1e-14);
}

TEST(Evaluate, DimensionMismatch) {
  OperatorPair p = make_pauli_pair();
  p.b = DenseMatrix::Identity(3, 3);
  EXPECT_THROW(evaluate_scheme(u21(), p, 0.1), InvalidArgument);
  EXPECT_THROW(target_matrix(target::commutator(), p, 0.1), InvalidArgument);
}

TEST(TargetMatrix, Definitions) {
  const OperatorPair p = make_random_pair(5, 4);
  const DenseMatrix ab = p.a * p.b - p.b * p.a;
  EXPECT_LT(max_abs(target_matrix(target::commutator(), p, 1.0) - expm(ab)), 1e-14);
  EXPECT_LT(max_abs(target_matrix(target::sum(), p, 0.5) - expm(0.5 * (p.a + p.b))), 1e-14);
  const double t = 0.7;
  const DenseMatrix aab = p.a * ab - ab * p.a;
  const DenseMatrix comb = t * (p.a + p.b) + t * t * ab + t * t * t * aab;
  EXPECT_LT(max_abs(target_matrix(target::combined(), p, t) - expm(comb)), 1e-14);
}

TEST(LieMatrix, MatchesWordExpansion) {
  // Every basis element evaluated recursively equals its word expansion
  // evaluated with matrix products.
  const OperatorPair p = make_random_pair(3, 5);
  const LieBasis& basis = standard_basis();
  for (int j = 1; j <= kMaxDegree; ++j)
    for (int l = 1; l <= kLieDimension[j]; ++l) {
      const TargetPolynomial e = target::make("e", {{{j, l}, 1.0}});
      const auto& words = basis.expansion(j, l).degree(j);
      DenseMatrix want = DenseMatrix::Zero(3, 3);
      for (std::uint32_t w = 0; w < words.size(); ++w) {
        if (words[w] == 0.0) continue;
        DenseMatrix m = DenseMatrix::Identity(3, 3);
        for (int i = 0; i < j; ++i) m = m * p[Word{j, w}.letter(i)];
        want += words[w] * m;
      }
      ASSERT_LT(max_abs(lie_matrix(e, p, 1.0) - want), 1e-13) << j << "," << l;
    }
}

TEST(MatrixPower, Repeated) {
  const OperatorPair p = make_random_pair(4, 8);
  const DenseMatrix u = expm(0.1 * p.a);
  EXPECT_LT(max_abs(matrix_power(u, 10) - expm(p.a)), 1e-13);
  EXPECT_EQ(matrix_power(u, 0), DenseMatrix::Identity(4, 4));
}

TEST(EmpiricalOrder, SlopeIsOrderPlusOne) {
  const OperatorPair p = make_pauli_pair();
  EXPECT_NEAR(empirical_order(ncp6_3(), p), 4.0, 0.1);
  EXPECT_NEAR(empirical_order(pcp26_6(), p), 7.0, 0.15);
  EXPECT_NEAR(empirical_order(yoshida(2), p), 5.0, 0.1);
  EXPECT_NEAR(empirical_order(zass_sym22(), p), 5.0, 0.15);
}

// The Pauli pair satisfies [A,[B,[B,A]]] = 0, which cancels the leading
// error term of fap8; a generic pair shows the nominal slope.
TEST(EmpiricalOrder, Fap8DependsOnPair) {
  EXPECT_GT(empirical_order(fap8(), make_pauli_pair()), 4.8);
  EXPECT_NEAR(empirical_order(fap8(), make_random_pair(16, 1)), 4.0, 0.1);
}

TEST(SlopeFit, ExactPowerLawAndUnderflow) {
  std::vector<SamplePoint> pts;
  for (double t : log_grid(0.01, 0.1, 5)) pts.push_back({t, 3.0 * std::pow(t, 4)});
  EXPECT_NEAR(slope_fit(pts), 4.0, 1e-12);
  const std::vector<SamplePoint> tiny{{0.1, 1e-16}, {0.2, 1e-15}, {0.3, 1e-3}};
  EXPECT_THROW(slope_fit(tiny), InvalidArgument);
}

// Properties over random inputs.

TEST(MatformProperty, ExpmInversePairs) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix m = random_matrix(rng, 6, u(rng));
    ASSERT_LT(max_abs(expm(m) * expm(-m) - DenseMatrix::Identity(6, 6)), 1e-12);
  }
}

TEST(MatformProperty, SkewHermitianGivesUnitary) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix g = random_matrix(rng, 7, 10.0);
    const DenseMatrix u = expm(g - g.adjoint());
    ASSERT_LT(max_abs(u.adjoint() * u - DenseMatrix::Identity(7, 7)), 1e-12);
    ASSERT_NEAR(two_norm(u), 1.0, 1e-12);
  }
}

TEST(MatformProperty, NormSubmultiplicativeAndUnitarilyInvariant) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix a = random_matrix(rng, 5, 3.0);
    const DenseMatrix b = random_matrix(rng, 5, 2.0);
    ASSERT_LE(two_norm(a * b), two_norm(a) * two_norm(b) * (1 + 1e-10));
    const DenseMatrix g = random_matrix(rng, 5, 1.0);
    const DenseMatrix q = expm(g - g.adjoint());
    ASSERT_NEAR(two_norm(q * a * q.adjoint()), two_norm(a), 1e-10 * two_norm(a));
  }
}

TEST(MatformProperty, LeadingErrorScaling) {
  const OperatorPair p = make_pauli_pair();
  const auto pts = single_step_errors(ncp6_3(), target::commutator(), p, default_order_grid());
  double lo = 1e300, hi = 0.0;
  for (const auto& pt : pts) {
    const double r = pt.error / std::pow(pt.t, 4);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 1.5);
}
