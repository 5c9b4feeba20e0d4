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

// commexp: catalog, verification, optimization and figure reproduction for
// product formulas approximating exponentials of commutators.
//
// Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commexp/commexp.hpp"

namespace fs = std::filesystem;
using namespace commexp;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

/// Raised for malformed input that CLI11 cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_dir() {
  const char* env = std::getenv("COMMEXP_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& out, const std::string& fallback) {
  if (out.empty()) return output_dir() / fallback;
  const fs::path p(out);
  return p.is_absolute() || p.has_parent_path() ? p : output_dir() / p;
}

Scheme resolve_scheme(const std::string& ref) {
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return load_scheme(ref);
  try {
    return catalog_get(ref);
  } catch (const UnknownScheme& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, long>)
        out.push_back(std::stol(tok, &used));
      else
        out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("bad {} entry '{}'", what, tok));
    }
  }
  if (out.empty()) throw UsageError(fmt::format("empty {} list", what));
  return out;
}

std::string effective_error_text(const Scheme& s) {
  try {
    return fmt::format("{:.3f}", effective_error(s).per_exponential);
  } catch (const Error&) {
    return "n/a";
  }
}

// schemes

int cmd_schemes_list() {
  for (const auto& name : catalog_names()) {
    const Scheme s = catalog_get(name);
    std::string line = fmt::format("{:<18}  order={}  s={:<3} E/s≈{}  target={}", s.name, s.order,
                                   s.size(), effective_error_text(s), s.target.name);
    if (const auto p = published_effective_error(name)) line += fmt::format("  (published {:.3f})", *p);
    fmt::print("{}\n", line);
  }
  return kOk;
}

int cmd_schemes_show(const std::string& name) {
  const Scheme s = resolve_scheme(name);
  fmt::print("name        {}\n", s.name);
  fmt::print("target      {}\n", s.target.name);
  fmt::print("order       {}\n", s.order);
  fmt::print("family      {}\n", to_string(s.family));
  fmt::print("provenance  {}\n", s.provenance);
  fmt::print("slots       {}\n", s.size());
  for (std::size_t i = 0; i < s.slots.size(); ++i) {
    const auto& sl = s.slots[i];
    if (sl.coefficient.imag() == 0.0)
      fmt::print("  {:>3}  {}  {:.17g}\n", i, to_char(sl.generator), sl.coefficient.real());
    else
      fmt::print("  {:>3}  {}  {:.17g} {:+.17g}i\n", i, to_char(sl.generator),
                 sl.coefficient.real(), sl.coefficient.imag());
  }
  return kOk;
}

int cmd_schemes_export(const std::string& name, const std::string& path) {
  const Scheme s = resolve_scheme(name);
  const fs::path out = resolve_output(path, s.name + ".scheme.json");
  save_scheme(s, out);
  fmt::print("wrote {}\n", out.string());
  return kOk;
}

// verify

int cmd_verify(const std::string& ref, double tol) {
  const Scheme s = resolve_scheme(ref);
  const ResidualReport rep = order_residuals(s, s.target, s.order, tol);
  fmt::print("scheme {}  ({} slots, target {}, claimed order {})\n", s.name, s.size(),
             s.target.name, s.order);
  for (int j = 1; j <= s.order + 1 && j <= kMaxDegree; ++j) {
    const char* mark = j <= s.order ? (rep.max_residual[j] <= rep.degree_tolerance[j] ? "ok" : "FAIL")
                                    : "leading";
    fmt::print("  degree {}  max residual {:.3e}  tolerance {:.1e}  {}\n", j, rep.max_residual[j],
               rep.degree_tolerance[j], mark);
  }
  if (rep.verified_order < s.order) {
    fmt::print("order {} NOT verified: first failure at degree {}\n", s.order, rep.first_failure);
    return kFailure;
  }
  const EffectiveError e = effective_error(s, s.order, tol);
  fmt::print("order {} verified, E = {:.6f}, E/s = {:.6f}\n", s.order, e.value, e.per_exponential);
  if (e.extended_basis)
    fmt::print("  degree {} measured in the extended basis; word-norm E/s = {:.6f}\n", s.order + 1,
               e.word_norm_per_exponential);
  return kOk;
}

// bench

int cmd_bench_figure(const std::string& fig, const std::string& out, std::uint64_t seed) {
  Figure f;
  try {
    f = figure_from_string(fig);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const fs::path path = resolve_output(out, fig + ".csv");
  const FigureOutput res = export_figure(f, path, seed);
  std::string files;
  for (const auto& p : res.files) files += (files.empty() ? "" : ", ") + p.string();
  fmt::print("{}: {} rows written to {}\n", fig, res.rows, files);
  return kOk;
}

struct CustomSpec {
  std::string schemes;
  std::string pair = "pauli";
  double t_total = 1.0;
  std::string n_list;
  std::string x_list;
  double tol = 0.0;
};

int cmd_bench_custom(const CustomSpec& spec, const std::string& out, std::uint64_t seed) {
  if (spec.schemes.empty()) throw UsageError("--custom needs --schemes");
  if (spec.n_list.empty() == spec.x_list.empty())
    throw UsageError("--custom needs exactly one of --n or --x");
  if (!spec.x_list.empty() && !(spec.tol > 0.0)) throw UsageError("--x needs a positive --tol");
  if (!(spec.t_total > 0.0)) throw UsageError("--t must be positive");
  OperatorPair pair;
  try {
    pair = make_pair(spec.pair, seed);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  std::vector<Scheme> schemes;
  for (const auto& name : split(spec.schemes, ',')) schemes.push_back(resolve_scheme(name));
  const fs::path path = resolve_output(out, "custom.csv");
  std::size_t rows = 0;
  if (!spec.n_list.empty()) {
    const auto ns = parse_list<long>(spec.n_list, "--n");
    for (long n : ns)
      if (n < 1) throw UsageError("--n entries must be positive");
    CsvTable t = curve_table();
    t.comment(fmt::format("custom run, pair {}, seed {}", pair.label, seed));
    for (const auto& s : schemes) append(t, error_curve(s, pair, spec.t_total, ns));
    t.save(path);
    rows = t.size();
  } else {
    const auto xs = parse_list<double>(spec.x_list, "--x");
    CsvTable t({"scheme", "x", "tol", "gates"});
    t.comment(fmt::format("custom run, pair {}, seed {}", pair.label, seed));
    for (const auto& s : schemes)
      for (const auto& r : gates_for_tolerance(s, pair, xs, spec.tol))
        t.row({r.scheme, csv_real(r.x), csv_real(r.tol), r.gates ? std::to_string(*r.gates) : "NA"});
    t.save(path);
    rows = t.size();
  }
  fmt::print("custom: {} rows written to {}\n", rows, path.string());
  return kOk;
}

// optimize

int cmd_optimize(const std::string& family, const std::string& range) {
  const auto parts = split(range, ':');
  if (parts.size() != 2) throw UsageError("--range must read a:b");
  const auto bounds = parse_list<double>(parts[0] + "," + parts[1], "--range");
  const double lo = bounds[0];
  const double hi = bounds[1];
  if (!(lo < hi)) throw UsageError("--range is empty");
  std::function<Scheme(double)> f;
  int order = 0;
  double reference = 0.0;
  const char* pname = "";
  if (family == "third_order") {
    if (lo <= 0.0 && hi >= 0.0) throw UsageError("--range for third_order must exclude c5 = 0");
    f = [](double c5) { return third_order_family(c5); };
    order = 3;
    reference = lo < 0.0 ? third_order_optimal_c5() : -third_order_optimal_c5();
    pname = "c5";
  } else if (family == "aor4") {
    if (lo <= 0.0) throw UsageError("--range for aor4 must be positive");
    f = [](double d2) { return aor4(d2); };
    order = 4;
    reference = aor4_optimal_d2();
    pname = "d2";
  } else {
    throw UsageError("unknown family: " + family + " (third_order, aor4)");
  }
  const OptimizeResult r = optimize_free_parameter(f, order, lo, hi);
  fmt::print("family {}  order {}  range [{:g}, {:g}]\n", family, order, lo, hi);
  fmt::print("minimizer {} = {:.12f}  E = {:.9f}  E/s = {:.9f}{}\n", pname, r.parameter,
             r.effective_error, r.per_exponential, r.flat ? "  (flat objective)" : "");
  fmt::print("closed form {} = {:.12f}  deviation {:.3e}\n", pname, reference,
             std::abs(r.parameter - reference));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commexp: product formulas for exponentials of commutators"};
  app.require_subcommand(1);

  auto* schemes = app.add_subcommand("schemes", "list, show or export catalog schemes");
  schemes->require_subcommand(1);
  schemes->add_subcommand("list", "list catalog schemes");
  std::string show_name;
  auto* show = schemes->add_subcommand("show", "print the slots of a scheme");
  show->add_option("name", show_name, "catalog name or scheme file")->required();
  std::string export_name;
  std::string export_path;
  auto* exp = schemes->add_subcommand("export", "write a scheme file");
  exp->add_option("name", export_name, "catalog name or scheme file")->required();
  exp->add_option("path", export_path, "output file");

  std::string verify_ref;
  double verify_tol = kOrderTolerance;
  auto* verify = app.add_subcommand("verify", "check the claimed order of a scheme");
  verify->add_option("--scheme", verify_ref, "catalog name or scheme file")->required();
  verify->add_option("--tol", verify_tol, "order-condition tolerance")
      ->check(CLI::PositiveNumber);

  std::string figure;
  std::string bench_out;
  std::uint64_t seed = kDefaultSeed;
  bool custom = false;
  CustomSpec spec;
  auto* bench = app.add_subcommand("bench", "run a figure preset or a custom error study");
  bench->add_option("--figure", figure, "fig1, fig2, fig3, fig5 or fig6");
  bench->add_flag("--custom", custom, "custom run");
  bench->add_option("--out", bench_out, "output CSV");
  bench->add_option("--seed", seed, "seed of random operator pairs");
  bench->add_option("--schemes", spec.schemes, "comma-separated scheme names");
  bench->add_option("--pair", spec.pair, "pauli or random:<d>");
  bench->add_option("--t", spec.t_total, "total time");
  bench->add_option("--n", spec.n_list, "comma-separated step counts");
  bench->add_option("--x", spec.x_list, "comma-separated x values for tolerance search");
  bench->add_option("--tol", spec.tol, "error tolerance for --x");

  std::string family;
  std::string range;
  auto* optimize = app.add_subcommand("optimize", "minimize the effective error of a family");
  optimize->add_option("--family", family, "third_order or aor4")->required();
  optimize->add_option("--range", range, "interval a:b")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (schemes->parsed()) {
      if (show->parsed()) return cmd_schemes_show(show_name);
      if (exp->parsed()) return cmd_schemes_export(export_name, export_path);
      return cmd_schemes_list();
    }
    if (verify->parsed()) return cmd_verify(verify_ref, verify_tol);
    if (bench->parsed()) {
      if (custom == !figure.empty()) throw UsageError("bench needs exactly one of --figure or --custom");
      return custom ? cmd_bench_custom(spec, bench_out, seed)
                    : cmd_bench_figure(figure, bench_out, seed);
    }
    if (optimize->parsed()) return cmd_optimize(family, range);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
