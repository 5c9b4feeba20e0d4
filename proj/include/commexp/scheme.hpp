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
#include <string_view>
#include <vector>

#include "commexp/errors.hpp"
#include "commexp/series.hpp"
#include "commexp/target.hpp"

namespace commexp {

enum class Family { General, PCP, NCP, Palindromic, Recursion, Extension };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::General: return "general";
    case Family::PCP: return "PCP";
    case Family::NCP: return "NCP";
    case Family::Palindromic: return "palindromic";
    case Family::Recursion: return "recursion";
    case Family::Extension: return "extension";
  }
  return "general";
}

inline Family family_from_string(std::string_view s) {
  for (Family f : {Family::General, Family::PCP, Family::NCP, Family::Palindromic,
                   Family::Recursion, Family::Extension})
    if (to_string(f) == s) return f;
  throw InvalidArgument("unknown family: " + std::string(s));
}

/// Sign relating the two halves of a counter-palindromic composition.
enum class CpSign { Positive, Negative };

inline double sign_value(CpSign s) { return s == CpSign::Positive ? 1.0 : -1.0; }

/// One factor exp(coefficient * t * generator).
struct ExponentSlot {
  Generator generator = Generator::A;
  cplx coefficient{};

  friend bool operator==(const ExponentSlot&, const ExponentSlot&) = default;
};

struct Scheme {
  std::string name;
  std::vector<ExponentSlot> slots;
  TargetPolynomial target;
  int order = 1;
  Family family = Family::General;
  std::string provenance;
  /// Half-pattern c_0..c_m of a counter-palindromic scheme, empty otherwise.
  std::vector<cplx> half;

  std::size_t size() const { return slots.size(); }

  bool is_real() const {
    for (const auto& s : slots)
      if (s.coefficient.imag() != 0.0) return false;
    return true;
  }

  bool is_cp() const { return family == Family::PCP || family == Family::NCP; }

  CpSign cp_sign() const {
    if (!is_cp()) throw InvalidArgument(name + " is not counter-palindromic");
    return family == Family::PCP ? CpSign::Positive : CpSign::Negative;
  }

  /// Factors exp(c t g) at time t.  The real form requires real coefficients.
  template <class S>
  std::vector<Factor<S>> factors(double t = 1.0) const {
    std::vector<Factor<S>> out;
    out.reserve(slots.size());
    for (const auto& s : slots) {
      if constexpr (is_complex_v<S>) {
        out.push_back({s.generator, s.coefficient * t});
      } else {
        if (s.coefficient.imag() != 0.0)
          throw InvalidArgument(name + " has complex coefficients; use the complex mode");
        out.push_back({s.generator, s.coefficient.real() * t});
      }
    }
    return out;
  }
};

/// Throws InvalidArgument unless the scheme is well formed.
inline void validate(const Scheme& s) {
  if (s.slots.empty()) throw InvalidArgument(s.name + ": no slots");
  if (s.order < 1) throw InvalidArgument(s.name + ": order must be at least 1");
  for (const auto& slot : s.slots)
    if (!std::isfinite(slot.coefficient.real()) || !std::isfinite(slot.coefficient.imag()))
      throw InvalidArgument(s.name + ": non-finite coefficient");
}

/// Adds the coefficients of adjacent same-generator slots and drops slots
/// whose merged coefficient falls below drop_tol in magnitude.
inline std::vector<ExponentSlot> merge_adjacent(const std::vector<ExponentSlot>& in,
                                                double drop_tol = 1e-15) {
  std::vector<ExponentSlot> out;
  for (const auto& s : in) {
    if (!out.empty() && out.back().generator == s.generator) {
      out.back().coefficient += s.coefficient;
      if (std::abs(out.back().coefficient) < drop_tol) out.pop_back();
    } else if (std::abs(s.coefficient) >= drop_tol) {
      out.push_back(s);
    }
  }
  return out;
}

/// (c_0 B, c_1 A, ..., c_m, +-c_m, ..., +-c_1 B, +-c_0 A): generators alternate
/// starting with B, and position m+1+k carries +-c_{m-k}.
inline std::vector<ExponentSlot> cp_expand(const std::vector<cplx>& half, CpSign sign) {
  if (half.size() < 2) throw InvalidArgument("cp_expand: need at least c_0 and c_1");
  const std::size_t m = half.size() - 1;
  const double sg = sign_value(sign);
  std::vector<ExponentSlot> out(2 * (m + 1));
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p].generator = p % 2 == 0 ? Generator::B : Generator::A;
    out[p].coefficient = p <= m ? half[p] : sg * half[2 * m + 1 - p];
  }
  return out;
}

inline std::vector<ExponentSlot> cp_expand(const std::vector<double>& half, CpSign sign) {
  return cp_expand(std::vector<cplx>(half.begin(), half.end()), sign);
}

/// c_0 fixed by the closure relation: -sum c_j (positive) or
/// sum (-1)^(j+1) c_j (negative), j = 1..m.
inline cplx cp_closure(const std::vector<cplx>& tail, CpSign sign) {
  cplx c0{};
  for (std::size_t j = 0; j < tail.size(); ++j) {
    if (sign == CpSign::Positive)
      c0 -= tail[j];
    else
      c0 += (j % 2 == 0 ? 1.0 : -1.0) * tail[j];
  }
  return c0;
}

/// Commutator-target scheme built from a half-pattern.
inline Scheme cp_scheme(std::string name, std::vector<cplx> half, CpSign sign, int order,
                        std::string provenance) {
  Scheme s;
  s.name = std::move(name);
  s.slots = cp_expand(half, sign);
  s.target = target::commutator();
  s.order = order;
  s.family = sign == CpSign::Positive ? Family::PCP : Family::NCP;
  s.provenance = std::move(provenance);
  s.half = std::move(half);
  return s;
}

/// Half-pattern read off the first half of a CP slot list.
inline std::vector<cplx> cp_half_from_slots(const std::vector<ExponentSlot>& slots) {
  if (slots.size() < 4 || slots.size() % 2 != 0)
    throw InvalidArgument("counter-palindromic slot lists have even length >= 4");
  std::vector<cplx> half;
  for (std::size_t p = 0; p < slots.size() / 2; ++p) half.push_back(slots[p].coefficient);
  return half;
}

/// True when the slots are exactly cp_expand of their own first half.
inline bool is_cp_pattern(const std::vector<ExponentSlot>& slots, CpSign sign) {
  if (slots.size() < 4 || slots.size() % 2 != 0) return false;
  return cp_expand(cp_half_from_slots(slots), sign) == slots;
}

// Invariance transforms.

/// t -> -t: every coefficient negated.
inline Scheme negate_time(const Scheme& s) {
  Scheme out = s;
  out.name = s.name + "_negated";
  for (auto& slot : out.slots) slot.coefficient = -slot.coefficient;
  for (auto& c : out.half) c = -c;
  out.target = transform_target(s.target, LetterMap{Generator::A, -1.0, Generator::B, -1.0},
                                "_negated");
  return out;
}

/// t -> i t, A -> -A: A-slot coefficients times -i, B-slot coefficients times i.
/// Maps NCP patterns to PCP patterns and back.
inline Scheme imaginary_rotation(const Scheme& s) {
  const cplx i{0.0, 1.0};
  const LetterMap map{Generator::A, -i, Generator::B, i};
  Scheme out = s;
  out.name = s.name + "_imaginary";
  for (auto& slot : out.slots) slot.coefficient *= map.factor(slot.generator);
  if (s.is_cp()) {
    out.family = s.family == Family::PCP ? Family::NCP : Family::PCP;
    out.half = cp_half_from_slots(out.slots);
  }
  out.target = transform_target(s.target, map, "_imaginary");
  return out;
}

/// A -> B, B -> -A: turns a BA composition into an AB one.
inline Scheme ab_swap(const Scheme& s) {
  Scheme out = s;
  out.name = s.name + "_abswap";
  for (auto& slot : out.slots) {
    if (slot.generator == Generator::A) {
      slot.generator = Generator::B;
    } else {
      slot.generator = Generator::A;
      slot.coefficient = -slot.coefficient;
    }
  }
  out.family = s.family == Family::Palindromic ? Family::Palindromic : Family::General;
  out.half.clear();
  out.target =
      transform_target(s.target, LetterMap{Generator::B, 1.0, Generator::A, -1.0}, "_abswap");
  return out;
}

/// Plain interchange A <-> B.
inline Scheme swap_generators(const Scheme& s) {
  Scheme out = s;
  out.name = s.name + "_swapped";
  for (auto& slot : out.slots) slot.generator = swapped(slot.generator);
  if (s.is_cp()) {
    out.family = Family::General;
    out.half.clear();
  }
  out.target = transform_target(s.target, LetterMap{Generator::B, 1.0, Generator::A, 1.0},
                                "_swapped");
  return out;
}

/// Real k-th root preserving sign for odd k.
inline double signed_root(double c, int k) {
  if (k == 1) return c;
  if (k == 3) return std::cbrt(c);
  return std::copysign(std::pow(std::abs(c), 1.0 / k), c);
}

/// Replaces every slot of `outer` on the abstract generator by `inner` run at
/// rescaled time tau = c^(1/k) t, where inner approximates exp(tau^k D).  For
/// even k and c < 0 the inner generators are swapped, which flips the sign of
/// a commutator target.  Slots on the other generator are copied.
inline Scheme substitute(const Scheme& outer, const Scheme& inner, int k,
                         Generator abstract = Generator::B, bool merge = true) {
  if (k < 1 || k > kMaxDegree) throw InvalidArgument("substitute: k out of range");
  if (!outer.is_real() || !inner.is_real())
    throw InvalidArgument("substitute: real coefficients required");
  Scheme swapped_inner;
  std::vector<ExponentSlot> slots;
  for (const auto& slot : outer.slots) {
    if (slot.generator != abstract) {
      slots.push_back(slot);
      continue;
    }
    const double c = slot.coefficient.real();
    const Scheme* block = &inner;
    double tau = 0.0;
    if (k % 2 == 1 || c >= 0.0) {
      tau = k % 2 == 1 ? signed_root(c, k) : std::pow(c, 1.0 / k);
    } else {
      if (inner.target.name != "commutator")
        throw InvalidArgument("substitute: negative coefficient with even k needs a commutator inner target");
      if (swapped_inner.slots.empty()) swapped_inner = swap_generators(inner);
      block = &swapped_inner;
      tau = std::pow(-c, 1.0 / k);
    }
    for (const auto& in : block->slots) slots.push_back({in.generator, in.coefficient * tau});
  }
  Scheme out = outer;
  out.name = outer.name + "[" + inner.name + "]";
  out.slots = merge ? merge_adjacent(slots) : slots;
  out.family = Family::Extension;
  out.half.clear();
  return out;
}

}  // namespace commexp
