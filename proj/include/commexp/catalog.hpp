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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commexp/errors.hpp"
#include "commexp/scheme.hpp"
#include "commexp/target.hpp"

namespace commexp {

namespace detail {

inline Scheme make_scheme(std::string name, std::vector<ExponentSlot> slots, TargetPolynomial t,
                          int order, Family family, std::string provenance) {
  Scheme s;
  s.name = std::move(name);
  s.slots = std::move(slots);
  s.target = std::move(t);
  s.order = order;
  s.family = family;
  s.provenance = std::move(provenance);
  return s;
}

/// Alternating slots starting with `first`.
inline std::vector<ExponentSlot> alternating(Generator first, const std::vector<cplx>& c) {
  std::vector<ExponentSlot> out;
  Generator g = first;
  for (const cplx& x : c) {
    out.push_back({g, x});
    g = swapped(g);
  }
  return out;
}

inline std::vector<ExponentSlot> scaled(const std::vector<ExponentSlot>& in, cplx f) {
  std::vector<ExponentSlot> out = in;
  for (auto& s : out) s.coefficient *= f;
  return out;
}

inline std::vector<cplx> with_closure(const std::vector<double>& tail, CpSign sign) {
  std::vector<cplx> t(tail.begin(), tail.end());
  std::vector<cplx> half{cp_closure(t, sign)};
  half.insert(half.end(), t.begin(), t.end());
  return half;
}

inline std::string num(double x) { return fmt::format("{:g}", x); }

}  // namespace detail

// Commutator targets.

/// e^{tA} e^{tB} e^{-tA} e^{-tB}.
inline Scheme u21() {
  using G = Generator;
  return detail::make_scheme("U21", {{G::A, 1.0}, {G::B, 1.0}, {G::A, -1.0}, {G::B, -1.0}},
                             target::commutator(), 2, Family::General, "group commutator, AB form");
}

/// e^{-tB} e^{tA} e^{tB} e^{-tA}.
inline Scheme u22() {
  using G = Generator;
  return detail::make_scheme("U22", {{G::B, -1.0}, {G::A, 1.0}, {G::B, 1.0}, {G::A, -1.0}},
                             target::commutator(), 2, Family::General, "group commutator, BA form");
}

inline Scheme s2_chen() {
  Scheme s = u21();
  s.name = "S2_chen";
  s.provenance = "second-order baseline, equal to U21";
  return s;
}

/// Six-exponential third-order family with free c5.  branch = +1 is the top
/// sign of the closed form.
inline Scheme third_order_family(double c5, int branch = 1) {
  if (c5 == 0.0) throw InvalidArgument("third_order_family: c5 must be nonzero");
  if (branch != 1 && branch != -1) throw InvalidArgument("third_order_family: branch is +1 or -1");
  const double r5 = std::sqrt(5.0);
  const double b = branch;
  const std::vector<cplx> c{(1.0 - b * r5) / (2.0 * c5), c5 * (-1.0 + b * r5) / 2.0, 1.0 / c5,
                            c5 * (-1.0 - b * r5) / 2.0, (-3.0 + b * r5) / (2.0 * c5), c5};
  return detail::make_scheme(fmt::format("third_order(c5={})", detail::num(c5)),
                             detail::alternating(Generator::B, c), target::commutator(), 3,
                             Family::General, "general third-order solution");
}

/// Free parameter minimizing the effective error of the third-order family.
inline double third_order_optimal_c5() { return -std::sqrt(2.0 / (std::sqrt(5.0) + 1.0)); }

inline Scheme s3_chen() {
  Scheme s = third_order_family(1.0);
  s.name = "S3_chen";
  s.provenance = "third-order baseline, family at c5 = 1";
  return s;
}

inline Scheme ncp6_3() {
  const double c1 = -std::sqrt(std::sqrt(5.0) - 2.0);
  const double c2 = -std::sqrt(2.0 / (std::sqrt(5.0) - 1.0));
  return cp_scheme("NCP6_3", {c1 - c2, c1, c2}, CpSign::Negative, 3, "optimized CP scheme");
}

inline Scheme ncp10_4() {
  return cp_scheme("NCP10_4",
                   detail::with_closure({0.4920434066428167763156, -1.569846260451462851779,
                                         -0.0340560371300231615989, 3.007307207357765662262},
                                        CpSign::Negative),
                   CpSign::Negative, 4, "optimized CP scheme");
}

inline Scheme pcp16_5() {
  return cp_scheme(
      "PCP16_5",
      detail::with_closure({0.2969175443796203417835, 1.418243492034305431995,
                            0.4347212029859471608694, -0.127142127469064995044,
                            -2.014276365712093993010, 0.8493401946712687892513,
                            -0.305642216160471071886},
                           CpSign::Positive),
      CpSign::Positive, 5, "optimized CP scheme");
}

inline Scheme pcp26_6() {
  return cp_scheme(
      "PCP26_6",
      detail::with_closure(
          {0.2464427486685065253599, 0.437855533639627516106, -0.6290554972825559401392,
           -1.160402744300525331934, -0.5248160600039844378749, -0.2264322765760404736976,
           0.1165418804073705040233, 0.4687839445292851414849, 1.983312306755703005101,
           -0.9894918460835968618662, 0.6722571007458945095097, -0.2387711966553848135336},
          CpSign::Positive),
      CpSign::Positive, 6, "optimized CP scheme");
}

inline Scheme pcp12_4() {
  return cp_scheme("PCP12_4",
                   detail::with_closure({0.3263285743794757829237, -1.564170317916158642032,
                                         -0.0234725141740210902965, 2.920816850699232751348,
                                         -0.8045459762846959202889},
                                        CpSign::Positive),
                   CpSign::Positive, 4, "optimized CP scheme, c_m held fixed");
}

inline Scheme ncp18_5() {
  return cp_scheme(
      "NCP18_5",
      detail::with_closure({-0.6410115692148225407946, 0.3165189600901244909982,
                            0.2075766074841999769730, -1.042459743800714071012,
                            1.027769699504593533740, 1.290831433928573680468,
                            0.7061407649397449413288, 0.253358191085494126186},
                           CpSign::Negative),
      CpSign::Negative, 5, "optimized CP scheme, c_m held fixed");
}

/// NCP6_3 under t -> i t, A -> -A: a PCP scheme with pure imaginary
/// coefficients.
inline Scheme pcp6_3_imaginary() {
  Scheme s = imaginary_rotation(ncp6_3());
  s.name = "PCP6_3_imaginary";
  s.provenance = "imaginary rotation of NCP6_3";
  return s;
}

/// Printed E^(r+1)/s of the tabulated schemes.
inline std::optional<double> published_effective_error(const std::string& name) {
  static const std::map<std::string, double> table{
      {"NCP6_3", 0.473}, {"NCP10_4", 0.606}, {"PCP16_5", 0.505},
      {"PCP26_6", 0.447}, {"PCP12_4", 0.455}, {"NCP18_5", 0.395}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// Sum targets.

/// e^{tA/2} e^{tB} e^{tA/2}.
inline Scheme strang() {
  using G = Generator;
  return detail::make_scheme("strang", {{G::A, 0.5}, {G::B, 1.0}, {G::A, 0.5}}, target::sum(), 2,
                             Family::Palindromic, "Strang splitting");
}

inline Scheme lie_trotter() {
  using G = Generator;
  return detail::make_scheme("lie_trotter", {{G::A, 1.0}, {G::B, 1.0}}, target::sum(), 1,
                             Family::General, "Lie-Trotter splitting");
}

namespace detail {

/// Concatenates copies of `base` scaled by `weights`, merging the seams.
inline std::vector<ExponentSlot> compose(const std::vector<ExponentSlot>& base,
                                         const std::vector<double>& weights) {
  std::vector<ExponentSlot> out;
  for (double w : weights) {
    const auto part = scaled(base, w);
    out.insert(out.end(), part.begin(), part.end());
  }
  return merge_adjacent(out);
}

}  // namespace detail

/// Triple jump: S_{2j}(t) = S_{2j-2}(g t) S_{2j-2}((1-2g) t) S_{2j-2}(g t),
/// g = 1/(2 - 2^{1/(2j-1)}), starting from Strang.  Order 2k.
inline Scheme yoshida(int k) {
  if (k < 2) throw InvalidArgument("yoshida: k must be at least 2");
  std::vector<ExponentSlot> slots = strang().slots;
  for (int j = 2; j <= k; ++j) {
    const double g = 1.0 / (2.0 - std::pow(2.0, 1.0 / (2 * j - 1)));
    slots = detail::compose(slots, {g, 1.0 - 2.0 * g, g});
  }
  return detail::make_scheme(fmt::format("yoshida{}", k), std::move(slots), target::sum(), 2 * k,
                             Family::Recursion, "triple-jump recursion");
}

/// Quintuple jump with a = 1/(4 - 4^{1/(2j-1)}).  Order 2k.
inline Scheme suzuki(int k) {
  if (k < 2) throw InvalidArgument("suzuki: k must be at least 2");
  std::vector<ExponentSlot> slots = strang().slots;
  for (int j = 2; j <= k; ++j) {
    const double a = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2 * j - 1)));
    slots = detail::compose(slots, {a, a, 1.0 - 4.0 * a, a, a});
  }
  return detail::make_scheme(fmt::format("suzuki{}", k), std::move(slots), target::sum(), 2 * k,
                             Family::Recursion, "quintuple-jump recursion");
}

// Sum plus commutator, t (A + B) + t^2 R^2 [A, B].  Slot coefficients are c_j R.

inline Scheme phi3(double r) {
  if (r == 0.0) throw InvalidArgument("phi3: R must be nonzero");
  const std::vector<double> c{-(2 * r * r - 1) / (2 * r), 1.0 / r, (2 * r * r + 1) / (2 * r)};
  std::vector<cplx> cr;
  for (double x : c) cr.push_back(x * r);
  return detail::make_scheme(fmt::format("phi3(R={})", detail::num(r)),
                             detail::alternating(Generator::B, cr), target::sum_plus_commutator(r), 2,
                             Family::Extension, "three-exponential sum plus commutator");
}

inline Scheme phi4(double r, double c3) {
  if (r == 0.0) throw InvalidArgument("phi4: R must be nonzero");
  if (r * c3 == 1.0) throw InvalidArgument("phi4: R c3 must differ from 1");
  const double q = r * c3 - 1.0;
  const std::vector<double> c{(2 * r * r + 2 * r * c3 - 1) / (2 * r * q), -q / r,
                              -(2 * r * r + 1) / (2 * r * q), c3};
  std::vector<cplx> cr;
  for (double x : c) cr.push_back(x * r);
  return detail::make_scheme(fmt::format("phi4(R={},c3={})", detail::num(r), detail::num(c3)),
                             detail::alternating(Generator::B, cr), target::sum_plus_commutator(r),
                             2, Family::Extension, "four-exponential sum plus commutator");
}

/// Third-order five-exponential scheme.  The coefficients turn complex when
/// 12 R^4 < 1.  branch = +1 is the top sign.
inline Scheme phi5(double r, int branch = 1) {
  if (r == 0.0) throw InvalidArgument("phi5: R must be nonzero");
  if (branch != 1 && branch != -1) throw InvalidArgument("phi5: branch is +1 or -1");
  const double r2 = r * r;
  const double r4 = r2 * r2;
  if (12.0 * r4 == 1.0) throw InvalidArgument("phi5: 12 R^4 must differ from 1");
  const cplx delta = std::sqrt(cplx(3.0 * (12.0 * r4 - 1.0) * (36.0 * r4 + 1.0))) / 12.0;
  const double b = branch;
  const double den = r * (12.0 * r4 - 1.0);
  const std::vector<cplx> c{(3 * r4 - r2 - b * delta + 0.25) / r,
                            (6 * r4 + 2.0 * b * delta - 0.5) / den, cplx(1.0 / (2 * r) - 6 * r2 * r),
                            (6 * r4 - 2.0 * b * delta - 0.5) / den,
                            (3 * r4 + r2 + b * delta + 0.25) / r};
  std::vector<cplx> cr;
  for (const cplx& x : c) cr.push_back(x * r);
  return detail::make_scheme(fmt::format("phi5(R={},branch={})", detail::num(r), branch > 0 ? "+" : "-"),
                             detail::alternating(Generator::B, cr), target::sum_plus_commutator(r),
                             3, Family::Extension, "five-exponential sum plus commutator");
}

// Nested commutator targets.

/// Eight exponentials for e^{t^3 [A,[A,B]]}, order 3.
inline Scheme fap8() {
  using G = Generator;
  return detail::make_scheme("fap8",
                             {{G::A, 1.0}, {G::B, 1.0}, {G::A, -1.0}, {G::B, -1.0},
                              {G::A, -1.0}, {G::B, 1.0}, {G::A, 1.0}, {G::B, -1.0}},
                             target::nested_aab(), 3, Family::Extension,
                             "product of two group commutators");
}

/// Palindromic BABABABAB composition of order 4 for e^{t^3 [A,[A,B]]} with
/// (d0..d4) = (-d2/2, +-1/sqrt(d2), d2, -+1/sqrt(d2), -d2).
inline Scheme aor4(double d2, int branch = 1) {
  if (!(d2 > 0.0)) throw InvalidArgument("aor4: d2 must be positive");
  if (branch != 1 && branch != -1) throw InvalidArgument("aor4: branch is +1 or -1");
  const double s = branch / std::sqrt(d2);
  const std::vector<cplx> d{-d2 / 2, s, d2, -s, -d2, -s, d2, s, -d2 / 2};
  return detail::make_scheme(fmt::format("aor4(d2={})", detail::num(d2)),
                             detail::alternating(Generator::B, d), target::nested_aab(), 4,
                             Family::Palindromic, "nine-exponential palindromic composition");
}

/// Minimizer of the aor4 effective error, ((sqrt(1346) - 36)/25)^(1/3).
inline double aor4_optimal_d2() { return std::cbrt((std::sqrt(1346.0) - 36.0) / 25.0); }

inline Scheme aor4_opt() {
  Scheme s = aor4(aor4_optimal_d2());
  s.name = "aor4_opt";
  return s;
}

/// Five exponentials for t (A + B) + t^2 [A, B] + t^3 [A, [A, B]], order 3.
inline Scheme combined5() {
  const double a = std::sqrt(47.0 / 3.0);
  const std::vector<cplx> d{-0.75 + a / 4, 0.5 + a / 2, 0.5, 0.5 - a / 2, 1.25 - a / 4};
  return detail::make_scheme("combined5", detail::alternating(Generator::B, d),
                             target::combined(), 3, Family::Extension,
                             "five-exponential combined target");
}

/// NCP10_4 with each B slot read as D = t^2 [A,[A,B]] and replaced by aor4:
/// order 4 for e^{t^4 [A,[A,[A,B]]]} with 50 exponentials.
inline Scheme nested4_50(bool merged = false) {
  Scheme s = substitute(ncp10_4(), aor4_opt(), 3, Generator::B, merged);
  s.name = merged ? "nested4_50_merged" : "nested4_50";
  s.target = target::nested_aaab();
  s.order = 4;
  s.provenance = "NCP10_4 outer, aor4 inner";
  return s;
}

/// Symmetric Zassenhaus truncation e^{tA/2} e^{tB/2} e^{t^3 D31} e^{t^3 D32}
/// e^{tB/2} e^{tA/2} with D31 = [A,[A,B]]/24 realized by aor4 and
/// D32 = [B,[A,B]]/12 = -[B,[B,A]]/12 by the A <-> B swapped aor4.  Left
/// unmerged, 22 exponentials.
inline Scheme zass_sym22() {
  using G = Generator;
  const Scheme inner = aor4_opt();
  const Scheme inner_swapped = swap_generators(inner);
  std::vector<ExponentSlot> slots{{G::A, 0.5}, {G::B, 0.5}};
  for (const auto& s : detail::scaled(inner.slots, std::cbrt(1.0 / 24.0))) slots.push_back(s);
  for (const auto& s : detail::scaled(inner_swapped.slots, std::cbrt(-1.0 / 12.0)))
    slots.push_back(s);
  slots.push_back({G::B, 0.5});
  slots.push_back({G::A, 0.5});
  return detail::make_scheme("zass_sym22", std::move(slots), target::sum(), 4, Family::Extension,
                             "symmetric Zassenhaus with aor4 blocks");
}

// Lookup.

/// Fixed catalog entries in display order.
inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{
      "U21",      "U22",      "S2_chen",   "S3_chen",   "NCP6_3",           "NCP10_4",
      "PCP16_5",  "PCP26_6",  "PCP12_4",   "NCP18_5",   "PCP6_3_imaginary", "strang",
      "lie_trotter", "yoshida2", "suzuki2", "fap8",     "aor4_opt",         "combined5",
      "phi3",     "phi4",     "phi5",      "zass_sym22", "nested4_50",      "nested4_50_merged"};
  return names;
}

namespace detail {

inline std::vector<double> parse_args(const std::string& name, const std::string& args) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= args.size()) {
    const std::size_t next = args.find(',', pos);
    std::string tok = args.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    const std::size_t eq = tok.find('=');
    if (eq != std::string::npos) tok = tok.substr(eq + 1);
    if (tok == "+") {
      out.push_back(1.0);
    } else if (tok == "-") {
      out.push_back(-1.0);
    } else {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw UnknownScheme(name);
      } catch (const std::logic_error&) {
        throw UnknownScheme(name);
      }
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

/// Looks up a catalog scheme.  Parametrized constructors accept arguments in
/// parentheses, e.g. "phi5(0.5,-)", "phi4(1,-1)", "aor4(0.3)", "yoshida(3)".
/// Bare "phi3", "phi4" and "phi5" default to R = 1, c3 = -1, top branch.
inline Scheme catalog_get(const std::string& name) {
  static const std::map<std::string, std::function<Scheme()>> fixed{
      {"U21", u21},
      {"U22", u22},
      {"S2_chen", s2_chen},
      {"S3_chen", s3_chen},
      {"NCP6_3", ncp6_3},
      {"NCP10_4", ncp10_4},
      {"PCP16_5", pcp16_5},
      {"PCP26_6", pcp26_6},
      {"PCP12_4", pcp12_4},
      {"NCP18_5", ncp18_5},
      {"PCP6_3_imaginary", pcp6_3_imaginary},
      {"strang", strang},
      {"lie_trotter", lie_trotter},
      {"yoshida2", [] { return yoshida(2); }},
      {"suzuki2", [] { return suzuki(2); }},
      {"fap8", fap8},
      {"aor4_opt", aor4_opt},
      {"combined5", combined5},
      {"phi3", [] { return phi3(1.0); }},
      {"phi4", [] { return phi4(1.0, -1.0); }},
      {"phi5", [] { return phi5(1.0, 1); }},
      {"zass_sym22", zass_sym22},
      {"nested4_50", [] { return nested4_50(false); }},
      {"nested4_50_merged", [] { return nested4_50(true); }},
  };
  if (const auto it = fixed.find(name); it != fixed.end()) return it->second();

  const std::size_t open = name.find('(');
  if (open == std::string::npos || name.back() != ')') throw UnknownScheme(name);
  const std::string base = name.substr(0, open);
  const auto a = detail::parse_args(name, name.substr(open + 1, name.size() - open - 2));
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (a.size() < lo || a.size() > hi) throw UnknownScheme(name);
  };
  if (base == "phi3") { need(1, 1); return phi3(a[0]); }
  if (base == "phi4") { need(2, 2); return phi4(a[0], a[1]); }
  if (base == "phi5") { need(1, 2); return phi5(a[0], a.size() > 1 ? static_cast<int>(a[1]) : 1); }
  if (base == "aor4") { need(1, 2); return aor4(a[0], a.size() > 1 ? static_cast<int>(a[1]) : 1); }
  if (base == "third_order") {
    need(1, 2);
    return third_order_family(a[0], a.size() > 1 ? static_cast<int>(a[1]) : 1);
  }
  if (base == "yoshida") { need(1, 1); return yoshida(static_cast<int>(a[0])); }
  if (base == "suzuki") { need(1, 1); return suzuki(static_cast<int>(a[0])); }
  throw UnknownScheme(name);
}

}  // namespace commexp
