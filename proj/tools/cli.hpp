#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <orldisc/orldisc.hpp>

namespace orldisc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Range {
  std::int64_t lo = 0, hi = -1;
  bool geometric = false;

  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> out;
    for (std::int64_t v = lo; v <= hi; v = geometric ? v * 2 : v + 1) out.push_back(v);
    return out;
  }
};

inline Range parse_range(const std::string& text, const char* what) {
  Range r;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3)
    throw UsageError(std::string(what) + ": expected a:b or a:b:geometric");
  try {
    std::size_t used = 0;
    r.lo = std::stoll(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    r.hi = std::stoll(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + ": bounds must be integers");
  }
  if (parts.size() == 3) {
    if (parts[2] != "geometric" && parts[2] != "linear")
      throw UsageError(std::string(what) + ": step must be 'geometric' or 'linear'");
    r.geometric = parts[2] == "geometric";
  }
  if (r.lo < 1) throw UsageError(std::string(what) + ": lower bound must be >= 1");
  return r;
}

/// Norm selection shared by `disc` and `sweep`.
struct NormArgs {
  std::string norm;
  std::optional<double> p, alpha;
  std::optional<std::string> phi;

  void add_to(CLI::App& app) {
    app.add_option("--norm", norm, "lp | star | psi-alpha | phi | alpha-norm")
        ->required()
        ->check(CLI::IsMember({"lp", "star", "psi-alpha", "phi", "alpha-norm"}));
    app.add_option("--p", p, "exponent for --norm lp");
    app.add_option("--alpha", alpha, "alpha for psi-alpha and alpha-norm");
    app.add_option("--phi", phi, "weight function as JSON, e.g. {\"kind\":\"power\",\"C\":1,\"r\":0.5}");
  }

  NormSpec resolve() const {
    const auto forbid = [&](bool present, const char* flag) {
      if (present) throw UsageError(std::string(flag) + " is not accepted with --norm " + norm);
    };
    const auto weight = [&]() {
      try {
        return WeightFn::from_json(nlohmann::json::parse(*phi));
      } catch (const std::exception& e) {
        throw UsageError(std::string("--phi: ") + e.what());
      }
    };
    if (norm == "lp") {
      forbid(alpha.has_value(), "--alpha");
      forbid(phi.has_value(), "--phi");
      if (!p) throw UsageError("--norm lp requires --p");
      if (!(*p >= 1.0)) throw UsageError("--p must be >= 1");
      return NormSpec::lp_norm(*p);
    }
    forbid(p.has_value(), "--p");
    if (norm == "star") {
      forbid(alpha.has_value(), "--alpha");
      forbid(phi.has_value(), "--phi");
      return NormSpec::star_norm();
    }
    if (norm == "phi") {
      forbid(alpha.has_value(), "--alpha");
      if (!phi) throw UsageError("--norm phi requires --phi");
      return NormSpec::phi_sup(weight());
    }
    if (!alpha) throw UsageError("--norm " + norm + " requires --alpha");
    if (!(*alpha >= 1.0)) throw UsageError("--alpha must be >= 1");
    if (norm == "alpha-norm") {
      forbid(phi.has_value(), "--phi");
      return NormSpec::alpha_sup(*alpha);
    }
    return phi ? NormSpec::psi(*alpha, weight()) : NormSpec::psi(*alpha);
  }
};

inline NormResult compute(const NormSpec& spec, const PointSet& points, double tol) {
  switch (spec.kind) {
    case NormSpec::Kind::star: {
      const StarResult s = star_discrepancy_detail(points);
      NormResult r;
      r.value = s.value;
      r.method = "corner-enumeration";
      r.cells = grid_cell_count(points);
      return r;
    }
    case NormSpec::Kind::lp:
      return lp_discrepancy(points, spec.p, tol);
    case NormSpec::Kind::psi_alpha:
      return luxemburg_norm(points, OrliczSpec::exponential(spec.alpha), tol);
    case NormSpec::Kind::psi_alpha_phi:
      return luxemburg_norm(points, OrliczSpec::series(spec.alpha, *spec.phi), tol);
    case NormSpec::Kind::phi:
      return phi_norm(points, *spec.phi, tol);
    case NormSpec::Kind::alpha_norm:
      return alpha_norm(points, spec.alpha, tol);
  }
  return {};
}

inline std::ostream* open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return &fallback;
  file.open(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  return &file;
}

inline std::vector<BoundReport> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<BoundReport> out;
  const auto compare = [&](std::string name, double lhs, double rhs, bool holds, nlohmann::json params) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.holds = holds;
    r.margin = rhs - lhs;
    r.params = std::move(params);
    out.push_back(std::move(r));
  };

  if (suite == "stirling") {
    for (std::int64_t p = 1; p <= 170; ++p) out.push_back(stirling_check(p));
  } else if (suite == "minconst") {
    out.push_back(min_const_check());
  } else if (suite == "construction") {
    out.push_back(construction_constants_check(12.75));
    out.push_back(construction_constants_check(100.0));
    compare("sixteen_a_squared", 16.0 * 12.75 * 12.75, 2601.0, 16.0 * 12.75 * 12.75 == 2601.0, {{"a", 12.75}});
  } else if (suite == "theorem2") {
    for (double alpha : {1.0, 1.5, 2.0, 3.0, 1e6}) {
      const double c = theorem2_constant(alpha);
      compare("theorem2_constant_at_least_2601", 2601.0, c, c >= 2601.0, {{"alpha", alpha}, {"C_alpha", c}});
    }
    {
      // C_alpha - 2601 ~ 5202 log(alpha) / alpha: 0.072 at 1e6, below 1e-3 from about 1e8 on
      const double gap6 = theorem2_constant(1e6) - 2601.0, gap9 = theorem2_constant(1e9) - 2601.0;
      compare("theorem2_constant_limit", gap9, 1e-3, gap9 >= 0.0 && gap9 < gap6 && gap9 <= 1e-3,
              {{"alpha", 1e9}, {"gap_at_1e6", gap6}, {"relative_gap_at_1e6", gap6 / 2601.0}});
    }
    for (double alpha : {1.0, 2.0, 3.0}) {
      const auto lo = theorem2_n_bound(alpha, 0.9, 4), hi = theorem2_n_bound(alpha, 0.1, 4);
      compare("theorem2_n_bound_eps_monotone", static_cast<double>(lo.value), static_cast<double>(hi.value),
              lo.value < hi.value, {{"alpha", alpha}, {"d", 4}});
      bool monotone = true;
      for (std::int64_t d = 1; d < 1024; ++d)
        monotone = monotone && theorem2_n_bound(alpha, 0.5, d).value <= theorem2_n_bound(alpha, 0.5, d + 1).value;
      compare("theorem2_n_bound_d_monotone", 0.0, 0.0, monotone, {{"alpha", alpha}, {"d_max", 1024}});
    }
    for (double r : {0.0, 0.5, 1.0}) {
      std::vector<double> ds, logs;
      for (std::int64_t d = 8; d <= 1024; d *= 2) {
        ds.push_back(static_cast<double>(d));
        logs.push_back(nbound1(0.5, d, WeightFn::power(1.0, r)).log_value);
      }
      const double slope = loglog_slope(ds, logs);
      compare("nbound1_d_exponent", std::abs(slope - (3.0 + 2.0 * r)), 0.1, std::abs(slope - (3.0 + 2.0 * r)) <= 0.1,
              {{"r", r}, {"slope", slope}});
    }
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t d = 10; d <= 10000; d *= 10) {
      const double eps = 1.0 / static_cast<double>(d);
      const double q = nbound1(eps, d, WeightFn::subexp(0.5)).log_value / (static_cast<double>(d) + 1.0 / eps);
      compare("nbound1_weak_tractability", q, prev, q < prev && (d < 10000 || q < 0.05), {{"d", d}, {"tau", 0.5}});
      prev = q;
    }
  } else if (suite == "initial") {
    for (std::size_t d = 1; d <= 4; ++d)
      for (double p : {1.0, 2.0, 3.0, 4.5, 7.0}) {
        const double computed = lp_discrepancy(PointSet(d), p).value;
        const double rel = std::abs(computed / initial_lp(p, d) - 1.0);
        compare("initial_lp", rel, 1e-6, rel <= 1e-6, {{"d", d}, {"p", p}, {"computed", computed}});
      }
    for (const WeightFn& phi : {WeightFn::power(1.0, 0.5), WeightFn::power(1.0, 1.0), WeightFn::subexp(0.5)})
      for (std::int64_t d = 1; d <= 8; ++d) {
        const NormResult r = phi_norm(PointSet(static_cast<std::size_t>(d)), phi);
        const double lower = initial_phi_lower(d, phi);
        compare("initial_phi_lower", lower, r.value, lower <= r.value, {{"d", d}, {"phi", phi.to_json()}});
      }
    for (double alpha : {1.0, 2.0})
      for (std::int64_t d = 2; d <= 20; ++d) {
        const NormResult r = alpha_norm(PointSet(static_cast<std::size_t>(d)), alpha);
        const double lower = initial_alpha_lower(d, alpha);
        compare("initial_alpha_lower", lower, r.value, lower <= r.value, {{"d", d}, {"alpha", alpha}});
      }
  } else if (suite == "lemma1") {
    for (double alpha : {1.0, 1.5, 2.0, 3.0, 10.0, 100.0}) {
      const SandwichConstants c = lemma1_psi_alpha_constants(alpha);
      compare("lemma1_constants_order", c.lower, c.upper, c.lower < 1.0 && 1.0 < c.upper, {{"alpha", alpha}});
    }
    for (std::uint64_t k = 0; k < 6; ++k) {
      const std::int64_t n = std::int64_t{8} << (k % 3);
      const std::size_t d = 1 + k / 3;
      ProfileLadder ladder(generate_uniform(n, d, derive_seed(seed, k)));
      for (double alpha : {1.0, 2.0, 3.0}) {
        out.push_back(lemma1_sandwich_check(ladder, alpha));
        out.push_back(lemma1_sandwich_check(ladder, alpha, WeightFn::power(1.0, 0.5)));
        out.push_back(lemma1_sandwich_check(ladder, alpha, WeightFn::subexp(0.5)));
      }
      const double exact = out[out.size() - 9].params["luxemburg"].get<double>();
      const BoundReport series = lemma1_sandwich_check(ladder, 1.0, WeightFn::factorial(1.0));
      const double lux = series.params["luxemburg"].get<double>();
      compare("lemma1_factorial_matches_exponential", std::abs(lux / exact - 1.0), 1e-6,
              std::abs(lux / exact - 1.0) <= 1e-6 && series.holds, {{"N", n}, {"d", d}});
    }
  } else if (suite == "hnww") {
    out.push_back(hnww_empirical_check(1, 16, 32, seed));
    out.push_back(hnww_empirical_check(2, 64, 32, seed));
  }
  return out;
}

struct SweepRow {
  std::int64_t d = 0, n = 0;
  double trial_min = 0.0, initial = 0.0, ratio = 0.0;
  std::optional<double> bound;
};

inline std::string sweep_infeasible(const NormSpec& spec, std::size_t d, std::int64_t n) {
  const double nd = static_cast<double>(n), dd = static_cast<double>(d);
  if (d > 5) return "sweep: exact engines are limited to d <= 5";
  if (spec.kind == NormSpec::Kind::star) {
    if (std::pow(nd + 2.0, dd) * dd > kStarWorkLimit)
      return "sweep: star discrepancy needs (N+2)^d * d <= 1e9 (N = " + std::to_string(n) + ", d = " +
             std::to_string(d) + ")";
  } else if (std::pow(nd + 1.0, dd) > 1e6) {
    return "sweep: integral norms need (N+1)^d <= 1e6 cells (N = " + std::to_string(n) + ", d = " +
           std::to_string(d) + ")";
  }
  return {};
}

/// Rows sorted by (d, N). The bound column is 10 sqrt(d/N) / initial for lp
/// and star (compare with ratio), and an upper bound on N at eps = ratio for
/// psi-alpha, phi and alpha-norm (compare with N).
inline std::vector<SweepRow> run_sweep(const NormSpec& spec, const std::vector<std::int64_t>& ds,
                                       const std::vector<std::int64_t>& ns, std::int64_t trials, std::uint64_t seed,
                                       double tol) {
  std::vector<SweepRow> rows;
  for (std::int64_t d : ds) {
    const auto ud = static_cast<std::size_t>(d);
    const double initial = spec.initial(ud, tol);
    for (std::int64_t n : ns) {
      SweepRow row{d, n, std::numeric_limits<double>::infinity(), initial, 0.0, std::nullopt};
      const std::uint64_t cell_seed = derive_seed(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n));
      for (std::int64_t t = 0; t < trials; ++t)
        row.trial_min = std::min(
            row.trial_min, spec.evaluate(generate_uniform(n, ud, derive_seed(cell_seed, static_cast<std::uint64_t>(t))), tol));
      row.ratio = row.trial_min / initial;
      const bool eps_ok = row.ratio > 0.0 && row.ratio < 1.0;
      switch (spec.kind) {
        case NormSpec::Kind::star:
        case NormSpec::Kind::lp:
          row.bound = kCptAistleitner * std::sqrt(static_cast<double>(d) / static_cast<double>(n)) / initial;
          break;
        case NormSpec::Kind::psi_alpha:
          if (eps_ok)
            row.bound = static_cast<double>(theorem2_n_bound(spec.alpha, psi_alpha_adjusted_eps(spec.alpha, row.ratio), d).value);
          break;
        case NormSpec::Kind::phi:
          if (eps_ok) row.bound = static_cast<double>(nbound1(row.ratio, d, *spec.phi).value);
          break;
        case NormSpec::Kind::alpha_norm:
          if (eps_ok) row.bound = static_cast<double>(nbound1(row.ratio, d, WeightFn::power(1.0, 1.0 / spec.alpha)).value);
          break;
        case NormSpec::Kind::psi_alpha_phi:
          break;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

/// Runs the command line; all output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrepancy of point sets under L_p, star and Orlicz norms"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a point set as CSV");
  std::string gen_kind, gen_out;
  std::int64_t gen_n = 0, gen_d = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "uniform | halton")->required()->check(CLI::IsMember({"uniform", "halton"}));
  gen->add_option("--n", gen_n, "number of points")->required();
  gen->add_option("--d", gen_d, "dimension")->required();
  gen->add_option("--seed", gen_seed, "seed for --kind uniform");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // disc
  auto* disc = app.add_subcommand("disc", "discrepancy of a point set");
  std::string disc_in;
  std::int64_t disc_d = 0;
  double disc_tol = 1e-9;
  bool disc_json = false;
  NormArgs disc_norm;
  disc->add_option("--in", disc_in, "point set CSV")->required();
  disc_norm.add_to(*disc);
  disc->add_option("--tol", disc_tol, "relative tolerance");
  disc->add_option("--d", disc_d, "dimension (needed for an empty file)");
  disc->add_flag("--json", disc_json, "print the result as JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "check the explicit constants and bounds");
  std::string suite;
  std::uint64_t verify_seed = 20240601;
  verify->add_option("--suite", suite, "stirling | lemma1 | initial | theorem2 | minconst | construction | hnww")
      ->required()
      ->check(CLI::IsMember({"stirling", "lemma1", "initial", "theorem2", "minconst", "construction", "hnww"}));
  verify->add_option("--seed", verify_seed, "seed for randomized suites");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "best-of-k discrepancy over ranges of d and N");
  NormArgs sweep_norm;
  std::string d_range, n_range, sweep_out;
  std::int64_t trials = 8;
  std::uint64_t sweep_seed = 1;
  double sweep_tol = 1e-8;
  sweep_norm.add_to(*sweep);
  sweep->add_option("--d-range", d_range, "a:b")->required();
  sweep->add_option("--n-range", n_range, "a:b or a:b:geometric")->required();
  sweep->add_option("--trials", trials, "random sets per (d, N)");
  sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--tol", sweep_tol, "relative tolerance");
  sweep->add_option("--out", sweep_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      if (gen_n < 0) throw UsageError("--n must be >= 0");
      if (gen_d < 1) throw UsageError("--d must be >= 1");
      if (gen_kind == "halton" && gen_d > static_cast<std::int64_t>(kHaltonPrimes.size()))
        throw UsageError("--kind halton supports d <= 16");
      const auto d = static_cast<std::size_t>(gen_d);
      const PointSet points = gen_kind == "uniform" ? generate_uniform(gen_n, d, gen_seed) : generate_halton(gen_n, d);
      std::ofstream file;
      save_pointset(*open_output(gen_out, file, out), points);
      return kOk;
    }

    if (disc->parsed()) {
      const NormSpec spec = disc_norm.resolve();
      if (!(disc_tol > 0.0 && disc_tol <= 1e-2)) throw UsageError("--tol must lie in (0, 1e-2]");
      if (disc_d < 0) throw UsageError("--d must be >= 1");
      std::ifstream in(disc_in, std::ios::binary);
      if (!in) throw UsageError("cannot read '" + disc_in + "'");
      PointSet points(1);
      try {
        points = load_pointset(in, static_cast<std::size_t>(disc_d));
      } catch (const std::invalid_argument& e) {
        throw UsageError(disc_in + ": " + e.what());
      }
      if (disc_d > 0 && points.dim() != static_cast<std::size_t>(disc_d))
        throw UsageError("--d does not match the dimension of " + disc_in);
      const NormResult r = compute(spec, points, disc_tol);
      if (disc_json) {
        out << to_json(r).dump() << "\n";
      } else {
        out << "value " << fmt17(r.value) << "\n";
        out << "abs_error_estimate " << fmt17(r.abs_error_estimate) << "\n";
        out << "method " << r.method << "\n";
        out << "converged " << (r.converged ? "true" : "false") << "\n";
        if (r.p_star) out << "p_star " << fmt17(*r.p_star) << "\n";
        if (!r.message.empty()) out << "message " << r.message << "\n";
      }
      return r.converged ? kOk : kNumerical;
    }

    if (verify->parsed()) {
      std::vector<BoundReport> reports = run_suite(suite, verify_seed);
      bool all = true;
      for (const BoundReport& r : reports) {
        out << to_json(r).dump() << "\n";
        all = all && r.holds;
      }
      return all ? kOk : kVerification;
    }

    if (sweep->parsed()) {
      const NormSpec spec = sweep_norm.resolve();
      const Range ds = parse_range(d_range, "--d-range");
      const Range ns = parse_range(n_range, "--n-range");
      if (trials < 1) throw UsageError("--trials must be >= 1");
      if (!(sweep_tol > 0.0 && sweep_tol <= 1e-2)) throw UsageError("--tol must lie in (0, 1e-2]");
      const auto d_values = ds.values();
      const auto n_values = ns.values();
      for (std::int64_t d : d_values)
        for (std::int64_t n : n_values) {
          const std::string why = sweep_infeasible(spec, static_cast<std::size_t>(d), n);
          if (!why.empty()) throw UsageError(why);
        }
      std::ofstream file;
      std::ostream& csv = *open_output(sweep_out, file, out);
      csv << "d,N,trial_min,initial,ratio,bound\n";
      for (const SweepRow& row : run_sweep(spec, d_values, n_values, trials, sweep_seed, sweep_tol))
        csv << row.d << ',' << row.n << ',' << fmt17(row.trial_min) << ',' << fmt17(row.initial) << ','
            << fmt17(row.ratio) << ',' << (row.bound ? fmt17(*row.bound) : std::string()) << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace orldisc::cli
