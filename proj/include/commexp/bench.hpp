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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commexp/catalog.hpp"
#include "commexp/convergence.hpp"
#include "commexp/errors.hpp"
#include "commexp/matrix.hpp"
#include "commexp/scheme.hpp"

namespace commexp {

/// Seed of the random 16 x 16 pair used by the figure presets.
inline constexpr std::uint64_t kDefaultSeed = 1;

struct BenchResult {
  std::string scheme;
  std::string pair;
  std::optional<std::uint64_t> seed;
  double t_total = 0.0;
  long n = 0;
  long gates = 0;
  double error = 0.0;
};

/// Per-step time and reference matrix for n steps reaching t_total.  For a
/// target homogeneous of degree k the step is tau = (t_total/n)^(1/k), so
/// that n steps compose to exp(t_total P); otherwise tau = t_total/n and the
/// reference is exp(target(tau))^n.
struct StepPlan {
  double tau = 0.0;
  DenseMatrix reference;
};

inline StepPlan step_plan(const TargetPolynomial& target, const OperatorPair& pair, double t_total,
                          long n) {
  if (n < 1) throw InvalidArgument("step count must be at least 1");
  if (!(t_total > 0.0)) throw InvalidArgument("total time must be positive");
  const int k = target.homogeneity();
  if (k > 0) {
    const double tau = std::pow(t_total / static_cast<double>(n), 1.0 / k);
    return {tau, target_matrix(target, pair, std::pow(t_total, 1.0 / k))};
  }
  const double tau = t_total / static_cast<double>(n);
  return {tau, matrix_power(target_matrix(target, pair, tau), n)};
}

inline double multi_step_error(const Scheme& scheme, const OperatorPair& pair, double t_total,
                               long n) {
  const StepPlan plan = step_plan(scheme.target, pair, t_total, n);
  return two_norm(matrix_power(evaluate_scheme(scheme, pair, plan.tau), n) - plan.reference);
}

inline std::vector<BenchResult> error_curve(const Scheme& scheme, const OperatorPair& pair,
                                            double t_total, const std::vector<long>& n_list) {
  std::vector<BenchResult> out;
  for (long n : n_list)
    out.push_back({scheme.name, pair.label, pair.seed, t_total, n,
                   n * static_cast<long>(scheme.size()), multi_step_error(scheme, pair, t_total, n)});
  return out;
}

/// 1, 2, 4, ..., 2^max_exp.
inline std::vector<long> power_of_two_grid(int max_exp, int min_exp = 0) {
  std::vector<long> v;
  for (int e = min_exp; e <= max_exp; ++e) v.push_back(1L << e);
  return v;
}

struct ToleranceResult {
  std::string scheme;
  double x = 0.0;
  double tol = 0.0;
  /// Smallest n meeting the tolerance, absent when n_cap was exceeded.
  std::optional<long> n;
  std::optional<long> gates;
};

/// For each x, the smallest n with |U(x/n^(1/k))^n - exp(x^k P)| <= tol,
/// found by doubling and then bisection.
inline std::vector<ToleranceResult> gates_for_tolerance(const Scheme& scheme,
                                                        const OperatorPair& pair,
                                                        const std::vector<double>& x_grid,
                                                        double tol, long n_cap = 1000000) {
  if (!(tol > 0.0)) throw InvalidArgument("gates_for_tolerance: tolerance must be positive");
  const int k = std::max(1, scheme.target.homogeneity());
  std::vector<ToleranceResult> out;
  for (double x : x_grid) {
    if (!(x > 0.0)) throw InvalidArgument("gates_for_tolerance: x must be positive");
    const double t_total = std::pow(x, k);
    const auto ok = [&](long n) { return multi_step_error(scheme, pair, t_total, n) <= tol; };
    ToleranceResult r{scheme.name, x, tol, std::nullopt, std::nullopt};
    long hi = 1;
    while (hi <= n_cap && !ok(hi)) hi *= 2;
    if (hi <= n_cap) {
      long lo = hi / 2;  // fails, or 0 when hi == 1
      while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (ok(mid))
          hi = mid;
        else
          lo = mid;
      }
      r.n = hi;
      r.gates = hi * static_cast<long>(scheme.size());
    }
    out.push_back(r);
  }
  return out;
}

// CSV output.

inline std::string csv_real(double x) { return fmt::format("{:.17g}", x); }

/// Accumulates comment rows, one header, and data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void comment(const std::string& text) { comments_.push_back("# " + text); }
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  std::string str() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << c << '\n';
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

  void save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << str();
    if (!f) throw Error("cannot write " + path.string());
  }

  std::size_t size() const { return rows_.size(); }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

inline CsvTable curve_table() {
  return CsvTable({"scheme", "pair", "t_total", "n", "gates", "error"});
}

inline void append(CsvTable& table, const std::vector<BenchResult>& rs) {
  for (const auto& r : rs)
    table.row({r.scheme, r.pair, csv_real(r.t_total), std::to_string(r.n),
               std::to_string(r.gates), csv_real(r.error)});
}

// Figure presets.

enum class Figure { Fig1, Fig2, Fig3, Fig5, Fig6 };

inline Figure figure_from_string(const std::string& s) {
  if (s == "fig1") return Figure::Fig1;
  if (s == "fig2") return Figure::Fig2;
  if (s == "fig3") return Figure::Fig3;
  if (s == "fig5") return Figure::Fig5;
  if (s == "fig6") return Figure::Fig6;
  throw InvalidArgument("unknown figure: " + s);
}

inline std::vector<std::string> fig1_schemes() {
  return {"NCP6_3", "NCP10_4", "PCP16_5", "PCP26_6", "S2_chen", "S3_chen"};
}

inline std::vector<std::string> fig2_schemes() {
  return {"NCP10_4", "PCP12_4", "PCP16_5", "NCP18_5"};
}

inline std::vector<std::string> fig5_schemes() {
  return {"S2_chen", "S3_chen", "NCP6_3", "NCP10_4", "PCP12_4", "PCP16_5", "NCP18_5", "PCP26_6"};
}

inline std::vector<std::string> fig6_methods() { return {"yoshida2", "suzuki2", "zass_sym22"}; }

/// Efficiency curves of `names` on the Pauli pair and a seeded random pair.
inline std::vector<BenchResult> efficiency_curves(const std::vector<std::string>& names,
                                                  double t_total, std::uint64_t seed,
                                                  int max_exp = 12) {
  const OperatorPair pairs[] = {make_pauli_pair(), make_random_pair(16, seed)};
  std::vector<BenchResult> out;
  for (const auto& pair : pairs)
    for (const auto& name : names) {
      const auto rs = error_curve(catalog_get(name), pair, t_total, power_of_two_grid(max_exp));
      out.insert(out.end(), rs.begin(), rs.end());
    }
  return out;
}

inline std::vector<double> fig5_x_grid() {
  std::vector<double> x;
  for (int i = 1; i <= 9; ++i) x.push_back(i / 10.0);
  return x;
}

/// Single-step grid of the fig6 left panel.
inline std::vector<double> fig6_t_grid() { return log_grid(0x1.0p-6, 1.0, 13); }

struct FigureOutput {
  std::vector<std::filesystem::path> files;
  std::size_t rows = 0;
};

namespace detail {

inline void omitted_baselines(CsvTable& t) {
  t.comment("G5 and G6 omitted: they are defined only by an external recursion");
}

}  // namespace detail

/// Writes the CSV of one figure preset.  fig6 also writes <stem>_cost.csv
/// next to `out`.
inline FigureOutput export_figure(Figure fig, const std::filesystem::path& out,
                                  std::uint64_t seed = kDefaultSeed) {
  FigureOutput res;
  switch (fig) {
    case Figure::Fig1:
    case Figure::Fig2:
    case Figure::Fig3: {
      CsvTable t = curve_table();
      const double t_total = fig == Figure::Fig3 ? 10.0 : 1.0;
      t.comment(fmt::format("error of U(tau)^n against exp(t_total [A,B]), tau = sqrt(t_total/n); "
                            "random16 seed {}", seed));
      if (fig != Figure::Fig2) detail::omitted_baselines(t);
      append(t, efficiency_curves(fig == Figure::Fig2 ? fig2_schemes() : fig1_schemes(), t_total,
                                  seed));
      t.save(out);
      res.rows = t.size();
      break;
    }
    case Figure::Fig5: {
      CsvTable t({"scheme", "x", "tol", "gates"});
      t.comment("smallest gate count with |U(x/sqrt(n))^n - exp(x^2 [A,B])| <= tol, pauli pair");
      t.comment("NA: not reached within n = 1000000");
      detail::omitted_baselines(t);
      const OperatorPair pauli = make_pauli_pair();
      for (double tol : {1e-4, 1e-7})
        for (const auto& name : fig5_schemes())
          for (const auto& r : gates_for_tolerance(catalog_get(name), pauli, fig5_x_grid(), tol))
            t.row({r.scheme, csv_real(r.x), csv_real(r.tol),
                   r.gates ? std::to_string(*r.gates) : "NA"});
      t.save(out);
      res.rows = t.size();
      break;
    }
    case Figure::Fig6: {
      const OperatorPair pauli = make_pauli_pair();
      CsvTable t({"method", "t", "error"});
      t.comment("single-step error against exp(t (A + B)), pauli pair");
      CsvTable cost({"method", "n", "gates", "error"});
      cost.comment("error against exp(A + B) after n steps of size 1/n, pauli pair");
      for (const auto& name : fig6_methods()) {
        const Scheme s = catalog_get(name);
        for (const auto& p : single_step_errors(s, s.target, pauli, fig6_t_grid()))
          t.row({name, csv_real(p.t), csv_real(p.error)});
        for (const auto& r : error_curve(s, pauli, 1.0, power_of_two_grid(10)))
          cost.row({name, std::to_string(r.n), std::to_string(r.gates), csv_real(r.error)});
      }
      t.save(out);
      auto cost_path = out;
      cost_path.replace_filename(out.stem().string() + "_cost" + out.extension().string());
      cost.save(cost_path);
      res.files.push_back(cost_path);
      res.rows = t.size() + cost.size();
      break;
    }
  }
  res.files.insert(res.files.begin(), out);
  return res;
}

}  // namespace commexp
