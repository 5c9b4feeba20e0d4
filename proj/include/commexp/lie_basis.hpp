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

// The nested-commutator basis E_{j,l} of the graded free Lie algebra in A, B
// for degrees 1..6, extended to degree 7 by E_{7,2k-1} = [A, E_{6,k}] and
// E_{7,2k} = [B, E_{6,k}].  Signs follow the published table, including
// E_{4,3} = -[B, E_{3,2}].

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "commexp/errors.hpp"
#include "commexp/series.hpp"

namespace commexp {

/// Dimension of the degree-j subspace, j = 0..7.
inline constexpr std::array<int, kMaxDegree + 1> kLieDimension = {0, 2, 1, 2, 3, 6, 9, 18};

/// Highest degree covered by the published table; degree 7 is the extension.
inline constexpr int kTableDegree = 6;

/// Absolute Lie-membership tolerance, scaled by the degree-j coefficient norm.
inline constexpr double kLieTolerance = 1e-10;

/// E_{j,l} = sign * [left, E_{j-1,parent}]; degree-1 elements are the letters.
struct BasisElement {
  int degree = 1;
  int index = 1;
  Generator left = Generator::A;
  int parent = 0;
  int sign = 1;

  std::string label() const {
    return "E_{" + std::to_string(degree) + "," + std::to_string(index) + "}";
  }

  std::string recipe() const {
    if (degree == 1) return std::string(1, to_char(left));
    const std::string inner = degree == 2 ? std::string(1, to_char(swapped(left)))
                                          : "E_{" + std::to_string(degree - 1) + "," +
                                                std::to_string(parent) + "}";
    return std::string(sign < 0 ? "-" : "") + "[" + to_char(left) + ", " + inner + "]";
  }
};

/// Coordinates w_{j,l} of a Lie element, degree by degree.
template <class S>
class LieCoefficients {
 public:
  explicit LieCoefficients(int truncation) : truncation_(truncation), w_(truncation + 1) {
    for (int j = 1; j <= truncation; ++j) w_[j].assign(kLieDimension[j], S{});
  }

  int truncation() const { return truncation_; }

  /// 1-based, matching E_{j,l}.
  S operator()(int j, int l) const { return w_.at(j).at(l - 1); }
  S& operator()(int j, int l) { return w_.at(j).at(l - 1); }

  std::span<const S> degree(int j) const { return w_.at(j); }
  std::span<S> degree(int j) { return w_.at(j); }

  double degree_norm(int j) const {
    double s = 0.0;
    for (const S& x : w_.at(j)) s += std::norm(x);
    return std::sqrt(s);
  }

 private:
  int truncation_;
  std::vector<std::vector<S>> w_;
};

class LieBasis {
 public:
  explicit LieBasis(int truncation) : truncation_(truncation) {
    if (truncation < 1 || truncation > kMaxDegree)
      throw InvalidArgument("basis_build: truncation must lie in [1, " +
                            std::to_string(kMaxDegree) + "]");
    elements_.resize(truncation + 1);
    expansions_.resize(truncation + 1);
    matrices_.resize(truncation + 1);
    qr_.resize(truncation + 1);
    sigma_min_.assign(truncation + 1, 0.0);

    for (int j = 1; j <= truncation; ++j) {
      elements_[j] = recipes(j);
      for (const BasisElement& e : elements_[j]) expansions_[j].push_back(expand(e));

      Eigen::MatrixXd m(1 << j, kLieDimension[j]);
      for (int l = 0; l < kLieDimension[j]; ++l) {
        const auto words = expansions_[j][l].degree(j);
        for (int w = 0; w < (1 << j); ++w) m(w, l) = words[w];
      }
      qr_[j].compute(m);
      if (qr_[j].rank() != kLieDimension[j])
        throw Error("basis_build: word expansions at degree " + std::to_string(j) +
                    " are linearly dependent");
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      sigma_min_[j] = svd.singularValues().minCoeff();
      matrices_[j] = std::move(m);
    }
  }

  int truncation() const { return truncation_; }
  int dimension(int j) const { return kLieDimension.at(j); }

  const BasisElement& element(int j, int l) const { return elements_.at(j).at(l - 1); }
  std::span<const BasisElement> elements(int j) const { return elements_.at(j); }

  /// Word expansion of E_{j,l}, truncated at the basis truncation.
  const TruncatedSeries<double>& expansion(int j, int l) const {
    return expansions_.at(j).at(l - 1);
  }

  /// Columns are the degree-j word expansions of E_{j,1..dim}.
  const Eigen::MatrixXd& matrix(int j) const { return matrices_.at(j); }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr(int j) const { return qr_.at(j); }
  double min_singular_value(int j) const { return sigma_min_.at(j); }

  /// True where the degree lies beyond the published table.
  static bool is_extension(int j) { return j > kTableDegree; }

 private:
  static std::vector<BasisElement> recipes(int j) {
    using G = Generator;
    struct R {
      G left;
      int parent;
      int sign;
    };
    std::vector<R> rs;
    switch (j) {
      case 1:
        return {BasisElement{1, 1, G::A, 0, 1}, BasisElement{1, 2, G::B, 0, 1}};
      case 2: rs = {{G::A, 2, 1}}; break;
      case 3: rs = {{G::A, 1, 1}, {G::B, 1, 1}}; break;
      case 4: rs = {{G::A, 1, 1}, {G::B, 1, 1}, {G::B, 2, -1}}; break;
      case 5:
        rs = {{G::A, 1, 1}, {G::B, 1, 1}, {G::A, 2, 1}, {G::B, 2, 1}, {G::A, 3, 1}, {G::B, 3, 1}};
        break;
      case 6:
        rs = {{G::A, 1, 1}, {G::B, 1, 1}, {G::A, 2, 1}, {G::A, 4, 1}, {G::B, 2, 1},
              {G::A, 5, 1}, {G::B, 5, 1}, {G::A, 6, 1}, {G::B, 6, 1}};
        break;
      case 7:
        for (int k = 1; k <= kLieDimension[6]; ++k) {
          rs.push_back({G::A, k, 1});
          rs.push_back({G::B, k, 1});
        }
        break;
      default: break;
    }
    std::vector<BasisElement> out;
    for (std::size_t i = 0; i < rs.size(); ++i)
      out.push_back(BasisElement{j, static_cast<int>(i) + 1, rs[i].left, rs[i].parent, rs[i].sign});
    return out;
  }

  TruncatedSeries<double> expand(const BasisElement& e) const {
    if (e.degree == 1) return TruncatedSeries<double>::letter(e.left, truncation_);
    const auto x = TruncatedSeries<double>::letter(e.left, truncation_);
    return commutator(x, expansions_[e.degree - 1][e.parent - 1]) * static_cast<double>(e.sign);
  }

  int truncation_;
  std::vector<std::vector<BasisElement>> elements_;
  std::vector<std::vector<TruncatedSeries<double>>> expansions_;
  std::vector<Eigen::MatrixXd> matrices_;
  std::vector<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr_;
  std::vector<double> sigma_min_;
};

inline LieBasis basis_build(int truncation) { return LieBasis(truncation); }

/// Shared immutable basis through degree 7.
inline const LieBasis& standard_basis() {
  static const LieBasis basis(kMaxDegree);
  return basis;
}

template <class S>
struct Projection {
  LieCoefficients<S> coefficients;
  /// Least-squares residual per degree (index j), zero above the basis range.
  std::vector<double> residual;
  /// Euclidean norm of the raw degree-j word coefficients (index j).
  std::vector<double> word_norm;
};

/// Solves (basis matrix) w_j = (degree-j words of s) in the least-squares
/// sense for every degree covered by both s and the basis.  Throws
/// NotLieElement when a residual exceeds kLieTolerance * max(1, |v_j|) plus
/// the optional per-degree round-off floor.
template <class S>
Projection<S> lie_project(const TruncatedSeries<S>& s, const LieBasis& basis,
                          std::span<const double> noise_floor = {}) {
  const int top = std::min(s.truncation(), basis.truncation());
  Projection<S> out{LieCoefficients<S>(top), std::vector<double>(s.truncation() + 1, 0.0),
                    std::vector<double>(s.truncation() + 1, 0.0)};
  for (int j = 1; j <= s.truncation(); ++j) out.word_norm[j] = s.degree_norm(j);

  for (int j = 1; j <= top; ++j) {
    const auto words = s.degree(j);
    Eigen::VectorXd re(words.size());
    Eigen::VectorXd im(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
      if constexpr (is_complex_v<S>) {
        re(w) = words[w].real();
        im(w) = words[w].imag();
      } else {
        re(w) = words[w];
        im(w) = 0.0;
      }
    }
    const Eigen::VectorXd wr = basis.qr(j).solve(re);
    const Eigen::VectorXd wi = basis.qr(j).solve(im);
    const double res = std::hypot((basis.matrix(j) * wr - re).norm(),
                                  (basis.matrix(j) * wi - im).norm());
    out.residual[j] = res;
    const double floor = j < static_cast<int>(noise_floor.size()) ? noise_floor[j] : 0.0;
    if (res > kLieTolerance * std::max(1.0, out.word_norm[j]) + floor)
      throw NotLieElement(j, res);
    for (int l = 0; l < basis.dimension(j); ++l) {
      if constexpr (is_complex_v<S>)
        out.coefficients.degree(j)[l] = S(wr(l), wi(l));
      else
        out.coefficients.degree(j)[l] = wr(l);
    }
  }
  return out;
}

/// Word expansion of sum_{j,l} w_{j,l} E_{j,l}.
template <class S>
TruncatedSeries<S> lie_expand(const LieCoefficients<S>& w, const LieBasis& basis, int truncation) {
  TruncatedSeries<S> s(truncation);
  const int top = std::min({w.truncation(), basis.truncation(), truncation});
  for (int j = 1; j <= top; ++j) {
    for (int l = 1; l <= basis.dimension(j); ++l) {
      const S c = w(j, l);
      if (c == S{}) continue;
      const auto src = basis.expansion(j, l).degree(j);
      auto dst = s.degree(j);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] += c * src[i];
    }
  }
  return s;
}

}  // namespace commexp
