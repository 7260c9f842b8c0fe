#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "distribution.hpp"
#include "lpnorm.hpp"
#include "star.hpp"
#include "weight.hpp"

namespace orldisc {

/// Young function psi_alpha(x) = exp(x^alpha) - 1, or the series
/// psi_{alpha,phi}(x) = sum_{p>=1} (x / phi(alpha p))^{alpha p} when a weight is set.
struct OrliczSpec {
  double alpha = 1.0;
  std::optional<WeightFn> weight;

  static OrliczSpec exponential(double alpha) { return checked({alpha, std::nullopt}); }
  static OrliczSpec series(double alpha, WeightFn phi) { return checked({alpha, std::move(phi)}); }

  bool is_exponential() const noexcept { return !weight.has_value(); }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"alpha", alpha}};
    j["weight"] = weight ? weight->to_json() : nlohmann::json(nullptr);
    return j;
  }

 private:
  static OrliczSpec checked(OrliczSpec s) {
    if (!(s.alpha >= 1.0)) throw std::invalid_argument("OrliczSpec: alpha must be >= 1");
    return s;
  }
};

inline constexpr double kLogMaxDouble = 709.0;

/// Evaluates the Young function at x >= 0. Overflow is reported as +inf.
///
/// The series is summed until a term is below tol times the partial sum after
/// the terms have started to decrease.
inline double young_eval(const OrliczSpec& spec, double x, double tol = 1e-16) {
  if (!(x >= 0.0)) throw std::invalid_argument("young_eval: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (spec.is_exponential()) {
    const double xa = std::pow(x, spec.alpha);
    return xa > kLogMaxDouble ? std::numeric_limits<double>::infinity() : std::expm1(xa);
  }
  const WeightFn& phi = *spec.weight;
  const double lx = std::log(x);
  double sum = 0.0, prev = 0.0;
  for (int p = 1; p <= 1000000; ++p) {
    const double q = spec.alpha * p;
    const double log_term = q * (lx - phi.log_value(q));
    if (log_term > kLogMaxDouble) return std::numeric_limits<double>::infinity();
    const double term = std::exp(log_term);
    sum += term;
    if (p > 1 && term <= prev && term <= tol * sum) return sum;
    prev = term;
  }
  return std::numeric_limits<double>::infinity();
}

/// Everything the sup-type and Orlicz norms need from a point set: the value
/// distribution of Delta_P and its sup norm (the star discrepancy).
struct DiscrepancyProfile {
  DeltaDistribution dist;
  double sup_norm = 0.0;
  bool sup_exact = false;  ///< false when sup_norm is only the largest sampled |Delta|
};

inline DiscrepancyProfile make_profile(const PointSet& points, const DistributionOptions& opt = {}) {
  DiscrepancyProfile profile{build_delta_distribution(points, opt), 0.0, false};
  try {
    profile.sup_norm = star_discrepancy_exact(points);
    profile.sup_exact = true;
  } catch (const FeasibilityError&) {
    profile.sup_norm = profile.dist.fine.max_abs();
  }
  return profile;
}

/// Profile of a function that is constant on each grid cell (|f| = |values|).
inline DiscrepancyProfile make_piecewise_constant_profile(const CellGrid& grid, std::span<const double> values) {
  DiscrepancyProfile profile{piecewise_constant_distribution(grid, values), 0.0, true};
  profile.sup_norm = profile.dist.fine.max_abs();
  return profile;
}

namespace detail {

inline double modular(const DiscreteMeasure& m, const OrliczSpec& spec, double k) {
  return m.integrate([&](double v) { return young_eval(spec, std::abs(v) / k); });
}

}  // namespace detail

/// Luxemburg norm inf{K > 0 : int psi(|Delta_P|/K) <= 1} of a profiled function.
///
/// The modular is strictly decreasing in K for nonzero Delta_P. The root is
/// bracketed starting from ||Delta||_inf / psi^{-1}(1) (exponential kind) or
/// ||Delta||_inf (series kind), then bisected to relative width tol. The error
/// estimate is the 4/8-point modular disagreement propagated through the
/// slope, plus half the final bracket.
inline NormResult luxemburg_norm(const DiscrepancyProfile& profile, const OrliczSpec& spec,
                                 double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tolerance must be positive");
  NormResult r;
  r.method = "bisection";
  r.cells = profile.dist.cells;
  r.subdivisions = profile.dist.pieces;
  const double sup = profile.sup_norm;
  if (sup == 0.0 || profile.dist.fine.max_abs() == 0.0) {
    r.message = "Delta vanishes identically";
    return r;
  }
  const auto& fine = profile.dist.fine;
  const auto phi_fine = [&](double k) { return detail::modular(fine, spec, k); };

  double hi = spec.is_exponential() ? sup / std::pow(std::numbers::ln2, 1.0 / spec.alpha) : sup;
  int steps = 0;
  while (!(phi_fine(hi) <= 1.0) && steps < 200) {
    hi *= 2.0;
    ++steps;
  }
  double lo = 0.5 * hi;
  while (!(phi_fine(lo) > 1.0) && steps < 200) {
    hi = lo;
    lo *= 0.5;
    ++steps;
  }
  if (steps >= 200) {
    r.converged = false;
    r.message = "could not bracket the modular equation";
    r.value = hi;
    return r;
  }

  std::size_t iterations = 0;
  while (hi - lo > tol * hi && iterations < 400) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (phi_fine(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  const double k = 0.5 * (lo + hi);
  r.value = k;
  r.iterations = iterations + static_cast<std::size_t>(steps);
  r.bracket_lo = lo;
  r.bracket_hi = hi;

  const double h = 1e-5;
  const double slope = (phi_fine(k * (1.0 - h)) - phi_fine(k * (1.0 + h))) / (2.0 * h * k);
  const double modular_gap = std::abs(phi_fine(k) - detail::modular(profile.dist.coarse, spec, k));
  const double quadrature_error = slope > 0.0 ? modular_gap / slope : 0.0;
  r.abs_error_estimate = quadrature_error + 0.5 * (hi - lo);
  r.converged = !profile.dist.budget_exceeded && quadrature_error <= tol * k;
  if (!r.converged) r.message = "modular quadrature error exceeds the K tolerance";
  return r;
}

inline constexpr double kPhiNormPCap = 1048576.0;  // 2^20

/// sup_{p >= 1} ||Delta_P||_{L_p} / phi(p) over a geometric grid in p with
/// golden-section refinement around the best grid point.
///
/// The grid stops at the first p where either ||Delta||_p >= (1 - tol) ||Delta||_inf
/// or ||Delta||_inf / phi(p) <= best so far; past that point no larger ratio
/// is possible for nondecreasing phi. If neither happens before p = 2^20 the
/// remaining tail bound ||Delta||_inf / phi(2^20) - best is added to the error
/// estimate. The sup is not provably unimodal in p; the refinement is a
/// heuristic and p_star records where it landed.
inline NormResult phi_norm(const DiscrepancyProfile& profile, const WeightFn& phi, double tol = 1e-9) {
  NormResult r;
  r.method = "sup-over-p";
  r.cells = profile.dist.cells;
  r.subdivisions = profile.dist.pieces;
  const double sup = profile.sup_norm;

  std::map<double, NormResult> cache;
  const auto lp = [&](double p) -> const NormResult& {
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, lp_norm(profile.dist, p)).first;
    return it->second;
  };
  const auto ratio = [&](double p) { return lp(p).value / phi(p); };

  std::vector<double> grid;
  double best = -1.0, best_p = 1.0, tail = 0.0;
  for (double p = 1.0;; p *= 2.0) {
    grid.push_back(p);
    const double value = ratio(p);
    if (value > best) {
      best = value;
      best_p = p;
    }
    if (lp(p).value >= (1.0 - tol) * sup || sup / phi(p) <= best) break;
    if (p >= kPhiNormPCap) {
      tail = std::max(0.0, sup / phi(p) - best);
      break;
    }
  }

  // Golden section in log p on the grid neighbours of the best point.
  const auto at = std::find(grid.begin(), grid.end(), best_p);
  double a = std::log(at == grid.begin() ? grid.front() : *(at - 1));
  double b = std::log(at + 1 == grid.end() ? grid.back() : *(at + 1));
  std::size_t iterations = grid.size();
  if (b > a) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = ratio(std::exp(x1)), f2 = ratio(std::exp(x2));
    while (b - a > 1e-9 && iterations < 200) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = ratio(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = ratio(std::exp(x2));
      }
      ++iterations;
    }
    for (const auto& [p, res] : cache) {
      const double value = res.value / phi(p);
      if (value > best) {
        best = value;
        best_p = p;
      }
    }
  }

  const NormResult& at_best = lp(best_p);
  r.value = best;
  r.p_star = best_p;
  r.iterations = iterations;
  r.abs_error_estimate = at_best.abs_error_estimate / phi(best_p) + tail;
  r.converged = at_best.converged && r.abs_error_estimate <= tol * best;
  if (!r.converged) r.message = "L_p quadrature error exceeds the tolerance";
  if (tail > 0.0) {
    r.converged = false;
    r.message = "ratio still below its tail bound at p = 2^20";
  }
  return r;
}

/// ||f||_alpha = sup_{p >= 1} p^{-1/alpha} ||f||_{L_p}.
inline NormResult alpha_norm(const DiscrepancyProfile& profile, double alpha, double tol = 1e-9) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha_norm: alpha must be >= 1");
  return phi_norm(profile, WeightFn::power(1.0, 1.0 / alpha), tol);
}

/// Profiles of one point set at increasing refinement levels, built on demand.
class ProfileLadder {
 public:
  explicit ProfileLadder(PointSet points) : points_(std::move(points)) {}

  const PointSet& points() const noexcept { return points_; }

  const DiscrepancyProfile& level(std::size_t k) {
    while (levels_.size() <= k) {
      DistributionOptions opt;
      for (std::size_t j = 0; j < levels_.size(); ++j) opt = opt.refined();
      if (levels_.empty()) {
        levels_.push_back(make_profile(points_, opt));
      } else {
        const DiscrepancyProfile& base = levels_.front();
        levels_.push_back({build_delta_distribution(points_, opt), base.sup_norm, base.sup_exact});
      }
    }
    return levels_[k];
  }

  /// Runs `solve` on successive levels until it reports convergence.
  template <class Solve>
  NormResult solve(std::size_t max_refinements, Solve&& solve_at) {
    NormResult r;
    for (std::size_t k = 0; k <= max_refinements; ++k) {
      r = solve_at(level(k));
      r.iterations += k;
      if (r.converged) return r;
    }
    return r;
  }

 private:
  PointSet points_;
  std::deque<DiscrepancyProfile> levels_;
};

inline constexpr std::size_t kDefaultRefinements = 2;

inline NormResult luxemburg_norm(const PointSet& points, const OrliczSpec& spec, double tol = 1e-10,
                                 std::size_t max_refinements = kDefaultRefinements) {
  ProfileLadder ladder(points);
  return ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return luxemburg_norm(p, spec, tol); });
}

inline NormResult phi_norm(const PointSet& points, const WeightFn& phi, double tol = 1e-9,
                           std::size_t max_refinements = kDefaultRefinements) {
  ProfileLadder ladder(points);
  return ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return phi_norm(p, phi, tol); });
}

inline NormResult alpha_norm(const PointSet& points, double alpha, double tol = 1e-9,
                             std::size_t max_refinements = kDefaultRefinements) {
  ProfileLadder ladder(points);
  return ladder.solve(max_refinements, [&](const DiscrepancyProfile& p) { return alpha_norm(p, alpha, tol); });
}

/// Luxemburg norm of a function constant on each cell of `grid`.
inline NormResult luxemburg_norm_piecewise_constant(const CellGrid& grid, std::span<const double> values,
                                                    const OrliczSpec& spec, double tol = 1e-10) {
  return luxemburg_norm(make_piecewise_constant_profile(grid, values), spec, tol);
}

}  // namespace orldisc
