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
#include <complex>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "commexp/lie_basis.hpp"

namespace commexp {

/// The Lie polynomial whose exponential a scheme approximates, as coordinates
/// in the standard basis.  Coordinates are complex so that targets survive the
/// imaginary time rotation; every built-in target is real.
struct TargetPolynomial {
  std::string name;
  LieCoefficients<cplx> coefficients{kMaxDegree};

  cplx at(int j, int l) const { return coefficients(j, l); }

  bool is_real() const {
    for (int j = 1; j <= kMaxDegree; ++j)
      for (const cplx& c : coefficients.degree(j))
        if (c.imag() != 0.0) return false;
    return true;
  }

  /// Lowest and highest populated degree; {0, 0} for the zero polynomial.
  std::pair<int, int> degree_range() const {
    int lo = 0;
    int hi = 0;
    for (int j = 1; j <= kMaxDegree; ++j) {
      if (coefficients.degree_norm(j) == 0.0) continue;
      if (lo == 0) lo = j;
      hi = j;
    }
    return {lo, hi};
  }

  /// k when every populated term has degree k, 0 otherwise.
  int homogeneity() const {
    const auto [lo, hi] = degree_range();
    return lo == hi ? lo : 0;
  }
};

namespace target {

inline TargetPolynomial make(std::string name,
                             std::initializer_list<std::pair<std::pair<int, int>, double>> terms) {
  TargetPolynomial t{std::move(name)};
  for (const auto& [jl, v] : terms) t.coefficients(jl.first, jl.second) = v;
  return t;
}

/// t^2 [A, B].
inline TargetPolynomial commutator() { return make("commutator", {{{2, 1}, 1.0}}); }

/// t (A + B).
inline TargetPolynomial sum() { return make("sum", {{{1, 1}, 1.0}, {{1, 2}, 1.0}}); }

/// t (A + B) + t^2 R^2 [A, B]; the slots carry the factor R.
inline TargetPolynomial sum_plus_commutator(double r) {
  return make(fmt::format("sum_plus_commutator(R={:.17g})", r),
              {{{1, 1}, 1.0}, {{1, 2}, 1.0}, {{2, 1}, r * r}});
}

/// t^3 [A, [A, B]].
inline TargetPolynomial nested_aab() { return make("nested_aab", {{{3, 1}, 1.0}}); }

/// t^4 [A, [A, [A, B]]].
inline TargetPolynomial nested_aaab() { return make("nested_aaab", {{{4, 1}, 1.0}}); }

/// t (A + B) + t^2 [A, B] + t^3 [A, [A, B]].
inline TargetPolynomial combined() {
  return make("combined", {{{1, 1}, 1.0}, {{1, 2}, 1.0}, {{2, 1}, 1.0}, {{3, 1}, 1.0}});
}

inline TargetPolynomial zero() { return TargetPolynomial{"zero"}; }

}  // namespace target

/// Letter substitution A -> a.factor * a.image, B -> b.factor * b.image.
struct LetterMap {
  Generator a_image = Generator::A;
  cplx a_factor{1.0};
  Generator b_image = Generator::B;
  cplx b_factor{1.0};

  Generator image(Generator g) const { return g == Generator::A ? a_image : b_image; }
  cplx factor(Generator g) const { return g == Generator::A ? a_factor : b_factor; }
};

/// Applies a letter map word by word.
inline TruncatedSeries<cplx> transform_series(const TruncatedSeries<cplx>& s, const LetterMap& m) {
  TruncatedSeries<cplx> out(s.truncation());
  for (int d = 0; d <= s.truncation(); ++d) {
    for (std::uint32_t bits = 0; bits < (1u << d); ++bits) {
      const Word w{d, bits};
      const cplx c = s[w];
      if (c == cplx{}) continue;
      cplx f{1.0};
      std::uint32_t nb = 0;
      for (int i = 0; i < d; ++i) {
        const Generator g = w.letter(i);
        f *= m.factor(g);
        nb = (nb << 1) | (m.image(g) == Generator::B ? 1u : 0u);
      }
      out[Word{d, nb}] += f * c;
    }
  }
  return out;
}

/// Rewrites a target under a letter map by expanding it into words,
/// substituting, and projecting back onto the standard basis.  The name gains
/// `suffix` unless the polynomial is unchanged.
inline TargetPolynomial transform_target(const TargetPolynomial& t, const LetterMap& m,
                                         const std::string& suffix) {
  const LieBasis& basis = standard_basis();
  const auto words = lie_expand(t.coefficients, basis, kMaxDegree);
  const auto proj = lie_project(transform_series(words, m), basis);
  TargetPolynomial out{t.name, proj.coefficients};
  bool same = true;
  for (int j = 1; j <= kMaxDegree; ++j) {
    for (int l = 1; l <= kLieDimension[j]; ++l) {
      cplx& c = out.coefficients(j, l);
      c = cplx(std::abs(c.real()) < 1e-14 ? 0.0 : c.real(),
               std::abs(c.imag()) < 1e-14 ? 0.0 : c.imag());
      if (std::abs(c - t.at(j, l)) > 1e-14) same = false;
      else c = t.at(j, l);
    }
  }
  if (!same) out.name += suffix;
  return out;
}

}  // namespace commexp
