#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "json.hpp"
#include "lpnorm.hpp"
#include "orlicz.hpp"
#include "pointset.hpp"
#include "star.hpp"
#include "weight.hpp"

namespace orldisc {

/// Outcome of one inequality check: holds <=> lhs <= rhs (up to the check's slack).
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double margin = 0.0;
  nlohmann::json params = nlohmann::json::object();
};

inline nlohmann::json to_json(const BoundReport& r) {
  return {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"margin", r.margin},
          {"params", r.params}};
}

/// ceil of a positive real given by its logarithm, saturating at 2^64 - 1.
struct IntegerBound {
  std::uint64_t value = 0;
  double log_value = 0.0;  ///< log of the real quantity before rounding up
  bool saturated = false;
};

inline IntegerBound ceil_from_log(double log_value) {
  IntegerBound b;
  b.log_value = log_value;
  if (!(log_value < 64.0 * std::numbers::ln2 - 1e-9)) {
    b.value = std::numeric_limits<std::uint64_t>::max();
    b.saturated = true;
    return b;
  }
  b.value = static_cast<std::uint64_t>(std::ceil(std::exp(log_value)));
  return b;
}

/// e^{11/12} / sqrt(2 pi), the lower Stirling constant.
inline double stirling_lower_constant() { return std::exp(11.0 / 12.0) / std::sqrt(2.0 * std::numbers::pi); }

inline constexpr double kLogSlack = 1e-12;

/// sqrt(2 pi p)(p/e)^p <= p! <= sqrt(2 pi p)(p/e)^p e^{1/(12p)}, in logs.
inline BoundReport stirling_check(std::int64_t p) {
  if (p < 1) throw std::invalid_argument("stirling_check: p must be >= 1");
  const double pd = static_cast<double>(p);
  const double log_lower = 0.5 * std::log(2.0 * std::numbers::pi * pd) + pd * (std::log(pd) - 1.0);
  const double log_upper = log_lower + 1.0 / (12.0 * pd);
  const double log_fact = std::lgamma(pd + 1.0);
  BoundReport r;
  r.name = "stirling";
  r.lhs = log_lower;
  r.rhs = log_upper;
  r.margin = std::min(log_fact - log_lower, log_upper - log_fact);
  r.holds = log_lower <= log_fact + kLogSlack && log_fact <= log_upper + kLogSlack;
  r.params = {{"p", p}, {"log_factorial", log_fact}};
  if (p <= 170)
    r.params["linear"] = {std::exp(log_lower), std::exp(log_fact), std::exp(log_upper)};
  return r;
}

/// C_alpha = 2601 alpha^{2/alpha} (sqrt(2 pi) / e^{11/12})^{2/alpha}.
inline double theorem2_constant(double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("theorem2_constant: alpha must be >= 1");
  return 2601.0 * std::pow(alpha / stirling_lower_constant(), 2.0 / alpha);
}

/// ceil(C_alpha d^{max(1, 2/alpha)} log(d+1)^{2/alpha} eps^{-2}).
inline IntegerBound theorem2_n_bound(double alpha, double eps, std::int64_t d) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("theorem2_n_bound: alpha must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("theorem2_n_bound: eps must lie in (0,1)");
  if (d < 1) throw std::invalid_argument("theorem2_n_bound: d must be >= 1");
  const double dd = static_cast<double>(d);
  const double log_value = std::log(theorem2_constant(alpha)) + std::max(1.0, 2.0 / alpha) * std::log(dd) +
                           (2.0 / alpha) * std::log(std::log1p(dd)) - 2.0 * std::log(eps);
  return ceil_from_log(log_value);
}

/// eps' with N_{psi_alpha}(eps, d) <= N_alpha(eps', d).
inline double psi_alpha_adjusted_eps(double alpha, double eps) {
  return eps * std::pow(stirling_lower_constant() / alpha, 1.0 / alpha);
}

inline constexpr double kCptSharp = 2.5287;
inline constexpr double kCptAistleitner = 10.0;

/// ceil(C_PT^2 d (d+1)^2 phi(d)^2 eps^{-2} sup_p phi(p)^{-2}).
inline IntegerBound nbound1(double eps, std::int64_t d, const WeightFn& phi, double c_pt = kCptSharp) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("nbound1: eps must lie in (0,1)");
  if (d < 1) throw std::invalid_argument("nbound1: d must be >= 1");
  if (!(c_pt > 0.0)) throw std::invalid_argument("nbound1: C_PT must be positive");
  const double dd = static_cast<double>(d);
  const double log_value = 2.0 * std::log(c_pt) + std::log(dd) + 2.0 * std::log1p(dd) +
                           2.0 * phi.log_value(dd) - 2.0 * std::log(eps) + std::log(phi.sup_inverse_square());
  return ceil_from_log(log_value);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& log_y) {
  if (x.size() != log_y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += log_y[k];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (log_y[k] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// 1 / ((d+1) phi(d)), the p = d lower bound on the initial phi-discrepancy.
inline double initial_phi_lower(std::int64_t d, const WeightFn& phi) {
  if (d < 1) throw std::invalid_argument("initial_phi_lower: d must be >= 1");
  const double dd = static_cast<double>(d);
  return 1.0 / ((dd + 1.0) * phi(dd));
}

/// 1 / (4 (d log(d+1))^{1/alpha}), from p = d log(d+1).
inline double initial_alpha_lower(std::int64_t d, double alpha) {
  if (d < 2) throw std::invalid_argument("initial_alpha_lower: d must be >= 2");
  if (!(alpha >= 1.0)) throw std::invalid_argument("initial_alpha_lower: alpha must be >= 1");
  const double dd = static_cast<double>(d);
  return 0.25 * std::pow(dd * std::log1p(dd), -1.0 / alpha);
}

/// g(d) = (1 + d log(d+1))^{-1/log(d+1)}.
inline double min_const_g(std::int64_t d) {
  const double dd = static_cast<double>(d);
  const double l = std::log1p(dd);
  return std::exp(-std::log1p(dd * l) / l);
}

inline constexpr double kMinConstValue = 0.257944;

/// Scans g over d in [1, max_d]: minimizer 20, minimum 0.257944 +- 1e-6, g >= 1/4.
inline BoundReport min_const_check(std::int64_t max_d = 1000000) {
  std::int64_t argmin = 1;
  double best = min_const_g(1);
  for (std::int64_t d = 2; d <= max_d; ++d) {
    const double g = min_const_g(d);
    if (g < best) {
      best = g;
      argmin = d;
    }
  }
  BoundReport r;
  r.name = "minconst";
  r.lhs = 0.25;
  r.rhs = best;
  r.margin = best - 0.25;
  r.holds = argmin == 20 && std::abs(best - kMinConstValue) <= 1e-6 && best >= 0.25;
  r.params = {{"argmin", argmin}, {"min", best}, {"scanned_to", max_d}};
  return r;
}

/// 2^{5/4} / (3^{3/4} a) + exp(4.9 - (a/5.7)^2) < 1.
inline BoundReport construction_constants_check(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("construction_constants_check: a must be positive");
  const double first = std::pow(2.0, 1.25) / (std::pow(3.0, 0.75) * a);
  const double second = std::exp(4.9 - (a / 5.7) * (a / 5.7));
  BoundReport r;
  r.name = "construction";
  r.lhs = first + second;
  r.rhs = 1.0;
  r.margin = 1.0 - r.lhs;
  r.holds = r.lhs < 1.0;
  r.params = {{"a", a}, {"first_term", first}, {"second_term", second}, {"sixteen_a_squared", 16.0 * a * a}};
  return r;
}

/// Constants c_lo <= c_hi with c_lo ||f||_norm <= ||f||_psi <= c_hi ||f||_norm.
struct SandwichConstants {
  double lower = 0.0;
  double upper = 0.0;
};

/// (e^{11/12}/sqrt(2 pi))^{1/alpha} and (2 e alpha)^{1/alpha}.
inline SandwichConstants lemma1_psi_alpha_constants(double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("lemma1 constants: alpha must be >= 1");
  return {std::pow(stirling_lower_constant(), 1.0 / alpha), std::pow(2.0 * std::numbers::e * alpha, 1.0 / alpha)};
}

/// inf_{p >= 1} phi(p) / max(phi(alpha), phi(p)); equals min(1, phi(1)/phi(alpha))
/// for nondecreasing phi.
inline double lemma1_phi_lower_closed(const WeightFn& phi, double alpha) {
  return std::min(1.0, phi(1.0) / phi(alpha));
}

/// The same infimum scanned on a grid over [1, alpha] plus a geometric tail.
inline double lemma1_phi_lower_grid(const WeightFn& phi, double alpha, int points = 2001) {
  const double pa = phi(alpha);
  double best = std::numeric_limits<double>::infinity();
  const auto visit = [&](double p) {
    const double v = phi(p);
    best = std::min(best, v / std::max(pa, v));
  };
  for (int k = 0; k < points; ++k) visit(1.0 + (alpha - 1.0) * k / (points - 1));
  for (double p = alpha; p <= 1e6 * alpha; p *= 1.5) visit(p);
  return best;
}

inline SandwichConstants lemma1_phi_constants(const WeightFn& phi, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("lemma1 constants: alpha must be >= 1");
  return {lemma1_phi_lower_closed(phi, alpha), std::pow(2.0, 1.0 / alpha)};
}

inline constexpr double kSandwichSlack = 1e-6;

namespace detail {

inline BoundReport sandwich_report(std::string name, double lux, double norm, SandwichConstants c,
                                   nlohmann::json params) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = c.lower * norm;
  r.rhs = c.upper * norm;
  r.holds = r.lhs <= lux * (1.0 + kSandwichSlack) && lux <= r.rhs * (1.0 + kSandwichSlack);
  r.margin = std::min(lux - r.lhs, r.rhs - lux);
  params["luxemburg"] = lux;
  params["norm"] = norm;
  params["lower_constant"] = c.lower;
  params["upper_constant"] = c.upper;
  r.params = std::move(params);
  return r;
}

}  // namespace detail

/// lower * ||Delta||_alpha <= ||Delta||_{psi_alpha} <= upper * ||Delta||_alpha.
///
/// Both norms are computed to relative tolerance `tol` on the coarsest
/// profile of the ladder that reaches it; NumericalError if none does.
inline BoundReport lemma1_sandwich_check(ProfileLadder& ladder, double alpha, double tol = 1e-7,
                                         std::size_t max_refinements = 3) {
  const auto spec = OrliczSpec::exponential(alpha);
  const NormResult lux =
      ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return luxemburg_norm(p, spec, tol); });
  const NormResult an =
      ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return alpha_norm(p, alpha, tol); });
  if (!lux.converged || !an.converged)
    throw NumericalError("lemma1_sandwich_check: " + (lux.converged ? an.message : lux.message));
  return detail::sandwich_report("lemma1_psi_alpha", lux.value, an.value, lemma1_psi_alpha_constants(alpha),
                                 {{"alpha", alpha}, {"p_star", *an.p_star}});
}

/// The general chain for psi_{alpha,phi} and ||.||_phi. The lower constant is
/// evaluated in closed form and on a grid; the two must agree.
inline BoundReport lemma1_sandwich_check(ProfileLadder& ladder, double alpha, const WeightFn& phi,
                                         double tol = 1e-7, std::size_t max_refinements = 3) {
  const auto spec = OrliczSpec::series(alpha, phi);
  const NormResult lux =
      ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return luxemburg_norm(p, spec, tol); });
  const NormResult pn =
      ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return phi_norm(p, phi, tol); });
  if (!lux.converged || !pn.converged)
    throw NumericalError("lemma1_sandwich_check: " + (lux.converged ? pn.message : lux.message));
  const SandwichConstants c = lemma1_phi_constants(phi, alpha);
  const double grid = lemma1_phi_lower_grid(phi, alpha);
  BoundReport r = detail::sandwich_report("lemma1_psi_alpha_phi", lux.value, pn.value, c,
                                          {{"alpha", alpha}, {"phi", phi.to_json()}, {"lower_constant_grid", grid},
                                           {"p_star", *pn.p_star}});
  r.holds = r.holds && std::abs(grid - c.lower) <= 1e-12 * c.lower;
  return r;
}

inline BoundReport lemma1_sandwich_check(const PointSet& points, double alpha, double tol = 1e-7) {
  ProfileLadder ladder(points);
  return lemma1_sandwich_check(ladder, alpha, tol);
}

inline BoundReport lemma1_sandwich_check(const PointSet& points, double alpha, const WeightFn& phi,
                                         double tol = 1e-7) {
  ProfileLadder ladder(points);
  return lemma1_sandwich_check(ladder, alpha, phi, tol);
}

/// Best-of-k random point sets against the star-discrepancy bound 10 sqrt(d/N)
/// and the expected L_d bound 2^{5/4} 3^{-3/4} N^{-1/2} (checked on the mean).
/// Probabilistic; the seed fixes the outcome.
inline BoundReport hnww_empirical_check(std::int64_t d, std::int64_t n, std::int64_t k_trials, std::uint64_t seed) {
  if (d < 1 || d > 3) throw std::invalid_argument("hnww_empirical_check: d must lie in [1, 3]");
  if (n < 1 || n > 128) throw std::invalid_argument("hnww_empirical_check: N must lie in [1, 128]");
  if (k_trials < 1) throw std::invalid_argument("hnww_empirical_check: need at least one trial");
  const auto ud = static_cast<std::size_t>(d);
  double best = std::numeric_limits<double>::infinity(), mean_ld = 0.0;
  std::vector<double> stars;
  for (std::int64_t trial = 0; trial < k_trials; ++trial) {
    const PointSet p = generate_uniform(n, ud, derive_seed(seed, static_cast<std::uint64_t>(n),
                                                           static_cast<std::uint64_t>(trial)));
    const double star = star_discrepancy_exact(p);
    stars.push_back(star);
    best = std::min(best, star);
    const NormResult ld = lp_discrepancy(p, static_cast<double>(d), 1e-8);
    mean_ld += ld.value / static_cast<double>(k_trials);
  }
  const double nd = static_cast<double>(n);
  const double star_bound = kCptAistleitner * std::sqrt(static_cast<double>(d) / nd);
  const double ld_bound = std::pow(2.0, 1.25) * std::pow(3.0, -0.75) / std::sqrt(nd);
  BoundReport r;
  r.name = "hnww";
  r.lhs = best;
  r.rhs = star_bound;
  r.margin = star_bound - best;
  const bool star_ok = best <= star_bound;
  const bool mean_ok = mean_ld <= ld_bound;
  r.holds = star_ok && mean_ok;
  r.params = {{"d", d},          {"N", n},           {"trials", k_trials}, {"seed", seed},
              {"star_holds", star_ok}, {"mean_Ld", mean_ld}, {"mean_Ld_bound", ld_bound},
              {"mean_Ld_holds", mean_ok}, {"probabilistic", true}};
  return r;
}

/// A discrepancy norm selectable at run time.
struct NormSpec {
  enum class Kind { lp, star, psi_alpha, psi_alpha_phi, phi, alpha_norm };
  Kind kind = Kind::star;
  double p = 2.0;
  double alpha = 1.0;
  std::optional<WeightFn> phi;

  static NormSpec lp_norm(double p) { return {Kind::lp, p, 1.0, std::nullopt}; }
  static NormSpec star_norm() { return {Kind::star, 2.0, 1.0, std::nullopt}; }
  static NormSpec psi(double alpha) { return {Kind::psi_alpha, 2.0, alpha, std::nullopt}; }
  static NormSpec psi(double alpha, WeightFn phi) { return {Kind::psi_alpha_phi, 2.0, alpha, std::move(phi)}; }
  static NormSpec phi_sup(WeightFn phi) { return {Kind::phi, 2.0, 1.0, std::move(phi)}; }
  static NormSpec alpha_sup(double alpha) { return {Kind::alpha_norm, 2.0, alpha, std::nullopt}; }

  /// Norm of Delta_P; throws NumericalError when the result is not converged.
  double evaluate(const PointSet& points, double tol = 1e-8) const {
    NormResult r;
    switch (kind) {
      case Kind::star:
        return star_discrepancy_exact(points);
      case Kind::lp:
        r = lp_discrepancy(points, p, std::min(tol, 1e-2));
        break;
      case Kind::psi_alpha:
        r = luxemburg_norm(points, OrliczSpec::exponential(alpha), tol);
        break;
      case Kind::psi_alpha_phi:
        r = luxemburg_norm(points, OrliczSpec::series(alpha, *phi), tol);
        break;
      case Kind::phi:
        r = phi_norm(points, *phi, tol);
        break;
      case Kind::alpha_norm:
        r = orldisc::alpha_norm(points, alpha, tol);
        break;
    }
    if (!r.converged) throw NumericalError("norm evaluation did not converge: " + r.message);
    return r.value;
  }

  double initial(std::size_t d, double tol = 1e-8) const {
    if (kind == Kind::star) return 1.0;
    if (kind == Kind::lp) return initial_lp(p, d);
    return evaluate(PointSet(d), tol);
  }
};

/// Result of the inverse-discrepancy search.
struct InverseSearch {
  std::int64_t n = 0;  ///< smallest N found; 0 if the cap was hit
  bool capped = false;
  double initial = 0.0;
  double achieved = 0.0;  ///< best-of-k discrepancy at n
  std::size_t evaluations = 0;
};

/// Upper estimate of N(eps, d): doubling then bisection on N for the predicate
/// "best of k candidate sets has disc <= eps * initial". Candidates at N are
/// the Halton set and k uniform sets seeded by (seed, N, trial).
inline InverseSearch empirical_inverse_discrepancy(const NormSpec& norm, double eps, std::size_t d,
                                                   std::int64_t k_trials, std::uint64_t seed,
                                                   std::int64_t n_cap = 4096, double tol = 1e-8) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("empirical_inverse_discrepancy: eps must lie in (0,1)");
  if (k_trials < 1) throw std::invalid_argument("empirical_inverse_discrepancy: need at least one trial");
  InverseSearch s;
  s.initial = norm.initial(d, tol);
  const double target = eps * s.initial;
  std::map<std::int64_t, double> best_of;
  const auto best = [&](std::int64_t n) {
    auto it = best_of.find(n);
    if (it != best_of.end()) return it->second;
    double b = d <= kHaltonPrimes.size() ? norm.evaluate(generate_halton(n, d), tol)
                                         : std::numeric_limits<double>::infinity();
    for (std::int64_t trial = 0; trial < k_trials; ++trial)
      b = std::min(b, norm.evaluate(generate_uniform(n, d, derive_seed(seed, static_cast<std::uint64_t>(n),
                                                                       static_cast<std::uint64_t>(trial))),
                                    tol));
    ++s.evaluations;
    best_of.emplace(n, b);
    return b;
  };

  std::int64_t hi = 1;
  while (best(hi) > target) {
    if (hi >= n_cap) {
      s.capped = true;
      return s;
    }
    hi = std::min(2 * hi, n_cap);
  }
  std::int64_t lo = hi / 2;  // fails (or 0)
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (best(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  s.n = hi;
  s.achieved = best(hi);
  return s;
}

}  // namespace orldisc
