// Acceptance checks 1-12: one PASS/FAIL line each, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <orldisc/orldisc.hpp>

using namespace orldisc;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds, <= 0 for none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Seeded instances shared by criteria 5 and 6.
std::vector<PointSet> sandwich_instances() {
  std::vector<PointSet> out;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::int64_t n = std::int64_t{8} << (k % 3);
    const std::size_t d = 1 + (k / 3) % 3;
    out.push_back(generate_uniform(n, d, derive_seed(kSeed, k)));
  }
  return out;
}

std::vector<ProfileLadder>& ladders() {
  static std::vector<ProfileLadder> all = [] {
    std::vector<ProfileLadder> v;
    for (PointSet& p : sandwich_instances()) v.emplace_back(std::move(p));
    return v;
  }();
  return all;
}

Outcome criterion1() {
  double worst = 0.0;
  for (std::size_t d = 1; d <= 4; ++d)
    for (double p : {1.0, 2.0, 3.0, 4.5, 7.0}) {
      const double v = lp_discrepancy(PointSet(d), p).value;
      worst = std::max(worst, std::abs(v / std::pow(p + 1.0, -static_cast<double>(d) / p) - 1.0));
    }
  return {worst <= 1e-6, fmt("max rel err %.3g over 20 cases", worst)};
}

Outcome criterion2() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto n = static_cast<std::int64_t>(1 + derive_seed(kSeed, k, 1) % 64);
    const std::size_t d = 1 + k % 4;
    const PointSet p = generate_uniform(n, d, derive_seed(kSeed, k, 2));
    const double w = warnock_l2(p);
    worst = std::max(worst, std::abs(lp_discrepancy(p, 2.0).value / w - 1.0));
  }
  return {worst <= 1e-8, fmt("max rel err %.3g over 50 instances", worst)};
}

Outcome criterion3() {
  bool grid_ok = true;
  for (int n : {1, 2, 4, 8}) {
    std::vector<double> x;
    for (int k = 0; k < n; ++k) x.push_back((2.0 * k + 1.0) / (2.0 * n));
    grid_ok = grid_ok && star_discrepancy_exact(PointSet(1, x)) == 1.0 / (2.0 * n);
  }
  int violations = 0;
  double min_gap = 1.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto n = static_cast<std::int64_t>(1 + derive_seed(kSeed, k, 3) % 32);
    const std::size_t d = 1 + k % 3;
    const PointSet p = generate_uniform(n, d, derive_seed(kSeed, k, 4));
    const double exact = star_discrepancy_exact(p);
    const double mc = star_discrepancy_lower_mc(p, 20000, derive_seed(kSeed, k, 5));
    violations += exact < mc;
    min_gap = std::min(min_gap, exact - mc);
  }
  return {grid_ok && violations == 0,
          std::string("centered grid exact: ") + (grid_ok ? "yes" : "no") +
              fmt("; exact < MC in %g of 50 (min gap %.3g)", violations, min_gap)};
}

Outcome criterion4() {
  // K (e^{1/K} - 1) = 2 by bisection.
  double lo = 0.1, hi = 10.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::expm1(1.0 / mid) > 2.0 ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  const double k = luxemburg_norm(PointSet(1), OrliczSpec::exponential(1)).value;
  const double err1 = std::abs(k - oracle);

  const CellGrid grid = build_cell_grid(generate_uniform(6, 2, kSeed));
  const double c = 0.37;
  std::vector<double> values(grid.cell_count(), c);
  double err2 = 0.0;
  for (double alpha : {1.0, 2.0, 3.0}) {
    const double v = luxemburg_norm_piecewise_constant(grid, values, OrliczSpec::exponential(alpha)).value;
    err2 = std::max(err2, std::abs(v - c / std::pow(std::log(2.0), 1.0 / alpha)));
  }
  return {err1 <= 1e-6 && err2 <= 1e-10,
          fmt("K = %.12f vs root %.12f (|diff| %.2g); ", k, oracle, err1) +
              fmt("constant case max err %.2g (0.59729 does not solve K(e^{1/K} - 1) = 2)", err2)};
}

Outcome sandwich(const std::vector<std::optional<WeightFn>>& weights) {
  int checks = 0, violations = 0, failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (ProfileLadder& ladder : ladders())
    for (double alpha : {1.0, 1.5, 2.0, 3.0})
      for (const auto& phi : weights) {
        ++checks;
        try {
          const BoundReport r = phi ? lemma1_sandwich_check(ladder, alpha, *phi) : lemma1_sandwich_check(ladder, alpha);
          violations += !r.holds;
          worst_margin = std::min(worst_margin, r.margin / std::max(r.rhs, 1e-300));
        } catch (const NumericalError&) {
          ++failures;
        }
      }
  return {violations == 0 && failures == 0,
          fmt("%g checks, %g violations, ", checks, violations) +
              fmt("%g unconverged; min relative margin %.3g", failures, worst_margin)};
}

Outcome criterion5() { return sandwich({std::nullopt}); }

Outcome criterion6() {
  return sandwich({WeightFn::power(1, 0.5), WeightFn::power(1, 1), WeightFn::subexp(0.5)});
}

Outcome criterion7() {
  int failed = 0;
  for (std::int64_t p = 1; p <= 170; ++p) failed += !stirling_check(p).holds;
  return {failed == 0, fmt("%g of 170 fail", failed)};
}

Outcome criterion8() {
  const BoundReport m = min_const_check();
  const BoundReport c = construction_constants_check(12.75);
  const double c_inf = theorem2_constant(1e6);
  const bool exact = 16.0 * 12.75 * 12.75 == 2601.0;
  const bool pass = m.holds && c.holds && exact && std::abs(c_inf - 2601.0) <= 1e-3;
  return {pass, "argmin " + m.params.at("argmin").dump() + fmt(", min %.9f; construction margin %.4g; ", m.rhs, c.margin) +
                    fmt("16a^2 = %.17g; |C_1e6 - 2601| = %.4g (limit %.0e)", 16.0 * 12.75 * 12.75,
                        std::abs(c_inf - 2601.0), 1e-3)};
}

Outcome criterion9() {
  std::string detail;
  bool pass = true;
  for (double r : {0.0, 0.5, 1.0}) {
    std::vector<double> d, log_n;
    for (int k = 3; k <= 10; ++k) {
      d.push_back(std::ldexp(1.0, k));
      log_n.push_back(nbound1(0.5, std::int64_t{1} << k, WeightFn::power(1, r)).log_value);
    }
    const double slope = loglog_slope(d, log_n);
    pass = pass && std::abs(slope - (3.0 + 2.0 * r)) <= 0.1;
    detail += fmt("r=%.1f slope %.4f; ", r, slope);
  }
  return {pass, detail};
}

Outcome criterion10() {
  std::vector<double> ratios;
  for (std::int64_t d : {10, 100, 1000, 10000}) {
    const double eps = 1.0 / static_cast<double>(d);
    ratios.push_back(nbound1(eps, d, WeightFn::subexp(0.5)).log_value / (static_cast<double>(d) + 1.0 / eps));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < ratios.size(); ++k) decreasing = decreasing && ratios[k] < ratios[k - 1];
  return {decreasing && ratios.back() < 0.05,
          fmt("ratios %.4g, %.4g, ", ratios[0], ratios[1]) + fmt("%.4g, %.4g", ratios[2], ratios[3])};
}

Outcome criterion11() {
  const double eps = 0.5;
  const double eps_prime = eps * std::sqrt(stirling_lower_constant()) / std::sqrt(2.0);
  bool pass = true;
  std::string detail = fmt("eps' = %.6f; ", eps_prime);
  for (std::size_t d : {1u, 2u}) {
    const InverseSearch s = empirical_inverse_discrepancy(NormSpec::psi(2), eps, d, 8, kSeed);
    const IntegerBound bound = theorem2_n_bound(2, eps_prime, static_cast<std::int64_t>(d));
    pass = pass && !s.capped && static_cast<std::uint64_t>(s.n) <= bound.value;
    detail += "d=" + std::to_string(d) + ": N=" + std::to_string(s.n) + " <= " + std::to_string(bound.value) + "; ";
  }
  return {pass, detail};
}

Outcome criterion12() {
  bool pass = true;
  std::string detail;
  for (auto [d, n] : {std::pair<std::int64_t, std::int64_t>{1, 16}, {2, 64}}) {
    const BoundReport r = hnww_empirical_check(d, n, 32, kSeed);
    const bool star_ok = r.params.at("star_holds").get<bool>();
    pass = pass && star_ok;
    detail += "(d=" + std::to_string(d) + ", N=" + std::to_string(n) + ") " + fmt("min D* %.4f <= %.4f; ", r.lhs, r.rhs);
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "initial L_p discrepancy", 10, criterion1},
      {2, "Warnock equivalence", 60, criterion2},
      {3, "star discrepancy exactness", 60, criterion3},
      {4, "Luxemburg correctness", 0, criterion4},
      {5, "psi_alpha sandwich", 600, criterion5},
      {6, "psi_{alpha,phi} sandwich", 0, criterion6},
      {7, "Stirling bounds", 0, criterion7},
      {8, "explicit constants", 0, criterion8},
      {9, "polynomial exponent 3 + 2r", 1, criterion9},
      {10, "weak tractability", 0, criterion10},
      {11, "inverse discrepancy vs N bound", 600, criterion11},
      {12, "best-of-32 star discrepancy", 0, criterion12},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && seconds > c.time_limit) {
      o.pass = false;
      o.detail += fmt(" (over the %.0f s limit)", c.time_limit);
    }
    failed += !o.pass;
    std::printf("criterion %2d %s: %s [%.2f s] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, seconds,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
