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

// Degree-truncated free associative algebra over the two symbols A and B.
//
// A TruncatedSeries stores every word of degree <= N densely, degree by
// degree; a word of degree d lives at offset 2^d - 1 + bits, where bits packs
// the letters most-significant-first with A = 0 and B = 1.  Since every
// exponent in a product formula is (coefficient) * t * (generator), the power
// of t carried by a word is its degree and needs no separate bookkeeping.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "commexp/errors.hpp"

namespace commexp {

/// Highest word degree the engine represents.
inline constexpr int kMaxDegree = 7;

using cplx = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class S>
inline constexpr bool is_complex_v = is_complex<S>::value;

enum class Generator : std::uint8_t { A = 0, B = 1 };

constexpr char to_char(Generator g) { return g == Generator::A ? 'A' : 'B'; }

constexpr Generator swapped(Generator g) {
  return g == Generator::A ? Generator::B : Generator::A;
}

inline Generator generator_from_char(char c) {
  if (c == 'A' || c == 'a') return Generator::A;
  if (c == 'B' || c == 'b') return Generator::B;
  throw InvalidArgument(std::string("not a generator: '") + c + "'");
}

/// A monomial in A and B.  The empty word is the algebra unit.
struct Word {
  int degree = 0;
  std::uint32_t bits = 0;

  static Word parse(std::string_view letters) {
    Word w;
    for (char c : letters) {
      w.bits = (w.bits << 1) | static_cast<std::uint32_t>(generator_from_char(c));
      ++w.degree;
    }
    return w;
  }

  Generator letter(int i) const {
    return static_cast<Generator>((bits >> (degree - 1 - i)) & 1u);
  }

  int count(Generator g) const {
    const int b = std::popcount(bits);
    return g == Generator::B ? b : degree - b;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < degree; ++i) s.push_back(to_char(letter(i)));
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;
};

namespace detail {

// Neumaier summation; complex values are compensated per component.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class S>
class CompensatedSum {
 public:
  void add(const S& x) {
    if constexpr (is_complex_v<S>) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      re_.add(x);
    }
  }
  S value() const {
    if constexpr (is_complex_v<S>)
      return S(re_.value(), im_.value());
    else
      return re_.value();
  }

 private:
  NeumaierSum re_;
  NeumaierSum im_;
};

inline void check_truncation(int n) {
  if (n < 0 || n > kMaxDegree)
    throw InvalidArgument("truncation order must lie in [0, " +
                          std::to_string(kMaxDegree) + "], got " +
                          std::to_string(n));
}

}  // namespace detail

template <class S>
class TruncatedSeries {
 public:
  using scalar_type = S;

  explicit TruncatedSeries(int truncation)
      : truncation_(truncation),
        coeffs_((detail::check_truncation(truncation),
                 (std::size_t{1} << (truncation + 1)) - 1),
                S{}) {}

  static TruncatedSeries unit(int truncation) {
    TruncatedSeries s(truncation);
    s.coeffs_[0] = S{1};
    return s;
  }

  static TruncatedSeries letter(Generator g, int truncation) {
    TruncatedSeries s(truncation);
    if (truncation >= 1) s[Word{1, static_cast<std::uint32_t>(g)}] = S{1};
    return s;
  }

  int truncation() const { return truncation_; }

  /// Coefficient of w; words above the truncation read as zero.
  S operator[](Word w) const {
    return w.degree > truncation_ ? S{} : coeffs_[offset(w.degree) + w.bits];
  }
  S& operator[](Word w) {
    if (w.degree > truncation_)
      throw InvalidArgument("word " + w.str() + " exceeds truncation order");
    return coeffs_[offset(w.degree) + w.bits];
  }
  S operator[](std::string_view letters) const { return (*this)[Word::parse(letters)]; }

  std::span<const S> degree(int d) const {
    return {coeffs_.data() + offset(d), std::size_t{1} << d};
  }
  std::span<S> degree(int d) {
    return {coeffs_.data() + offset(d), std::size_t{1} << d};
  }

  /// Euclidean norm of the degree-d word coefficients.
  double degree_norm(int d) const {
    double s = 0.0;
    for (const S& c : degree(d)) s += std::norm(c);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const S& c : coeffs_) m = std::max(m, static_cast<double>(std::abs(c)));
    return m;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator*=(const S& c) {
    for (S& x : coeffs_) x *= c;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const S& c) { return a *= c; }
  friend TruncatedSeries operator*(const S& c, TruncatedSeries a) { return a *= c; }

  void require_same(const TruncatedSeries& o) const {
    if (o.truncation_ != truncation_)
      throw TruncationMismatch("series truncations differ: " +
                               std::to_string(truncation_) + " vs " +
                               std::to_string(o.truncation_));
  }

 private:
  static constexpr std::size_t offset(int d) { return (std::size_t{1} << d) - 1; }

  int truncation_;
  std::vector<S> coeffs_;
};

/// Concatenation product; words longer than the truncation are dropped.
template <class S>
TruncatedSeries<S> series_mul(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  a.require_same(b);
  const int n = a.truncation();
  TruncatedSeries<S> r(n);
  for (int d = 0; d <= n; ++d) {
    auto out = r.degree(d);
    for (std::uint32_t w = 0; w < out.size(); ++w) {
      detail::CompensatedSum<S> acc;
      for (int k = 0; k <= d; ++k) {
        const int tail = d - k;
        const S& x = a.degree(k)[w >> tail];
        if (x == S{}) continue;
        acc.add(x * b.degree(tail)[w & ((1u << tail) - 1u)]);
      }
      out[w] = acc.value();
    }
  }
  return r;
}

template <class S>
TruncatedSeries<S> operator*(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  return series_mul(a, b);
}

/// Truncated Taylor series of exp(c * g).
template <class S>
TruncatedSeries<S> exp_slot(Generator g, const S& c, int truncation) {
  TruncatedSeries<S> s(truncation);
  S term{1};
  for (int k = 0; k <= truncation; ++k) {
    if (k > 0) term = term * c / S(static_cast<double>(k));
    const std::uint32_t bits = g == Generator::A ? 0u : (1u << k) - 1u;
    s[Word{k, bits}] = term;
  }
  return s;
}

/// One exponential factor exp(coefficient * t * generator) of a product.
template <class S>
struct Factor {
  Generator generator;
  S coefficient;
};

/// Logarithm of a product together with the largest intermediate coefficient
/// magnitude seen at each degree, from which a round-off floor is estimated.
template <class S>
struct LogExpansion {
  TruncatedSeries<S> log;
  std::array<double, kMaxDegree + 1> magnitude{};
  int operations = 0;

  /// Round-off bound on the degree-d word coefficients of `log`.
  double noise_floor(int d) const {
    return 4.0 * operations * std::numeric_limits<double>::epsilon() * magnitude[d];
  }
};

namespace detail {

template <class S>
void track(const TruncatedSeries<S>& s, std::array<double, kMaxDegree + 1>& mag,
           double scale = 1.0) {
  for (int d = 0; d <= s.truncation(); ++d)
    for (const S& c : s.degree(d))
      mag[d] = std::max(mag[d], scale * static_cast<double>(std::abs(c)));
}

template <class S>
TruncatedSeries<S> log_impl(const TruncatedSeries<S>& s,
                            std::array<double, kMaxDegree + 1>* mag) {
  if (std::abs(s[Word{}] - S{1}) > 1e-12)
    throw InvalidArgument("series_log: coefficient of the empty word must be 1");
  const int n = s.truncation();
  TruncatedSeries<S> z = s;
  z[Word{}] = S{};
  TruncatedSeries<S> result(n);
  TruncatedSeries<S> power = TruncatedSeries<S>::unit(n);
  for (int k = 1; k <= n; ++k) {
    power = series_mul(power, z);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    if (mag) track(power, *mag, 1.0 / k);
    result += power * S(sign / k);
  }
  return result;
}

}  // namespace detail

/// log(1 + Z) = sum_k (-1)^(k+1) Z^k / k, truncated.
template <class S>
TruncatedSeries<S> series_log(const TruncatedSeries<S>& s) {
  return detail::log_impl<S>(s, nullptr);
}

/// Logarithm of the left-to-right product of exp(c_i g_i); the first factor is
/// leftmost.
template <class S>
LogExpansion<S> scheme_log_tracked(std::span<const Factor<S>> factors, int truncation) {
  if (factors.empty()) throw InvalidArgument("scheme_log: empty slot list");
  LogExpansion<S> out{TruncatedSeries<S>(truncation)};
  TruncatedSeries<S> product = TruncatedSeries<S>::unit(truncation);
  for (const auto& f : factors) {
    product = series_mul(product, exp_slot(f.generator, f.coefficient, truncation));
    detail::track(product, out.magnitude);
  }
  out.log = detail::log_impl(product, &out.magnitude);
  out.operations = static_cast<int>(factors.size()) + truncation;
  return out;
}

template <class S>
TruncatedSeries<S> scheme_log(std::span<const Factor<S>> factors, int truncation) {
  return scheme_log_tracked(factors, truncation).log;
}

template <class S>
TruncatedSeries<S> scheme_log(const std::vector<Factor<S>>& factors, int truncation) {
  return scheme_log(std::span<const Factor<S>>(factors), truncation);
}

/// X Y - Y X.
template <class S>
TruncatedSeries<S> commutator(const TruncatedSeries<S>& x, const TruncatedSeries<S>& y) {
  return series_mul(x, y) - series_mul(y, x);
}

}  // namespace commexp
