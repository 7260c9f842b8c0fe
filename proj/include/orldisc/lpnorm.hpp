#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "json.hpp"
#include "localdisc.hpp"

namespace orldisc {

/// A computed norm of Delta_P together with how it was obtained.
struct NormResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool converged = true;
  std::string method;
  std::size_t cells = 0;
  std::size_t subdivisions = 0;  ///< quadrature pieces of the final distribution
  std::size_t iterations = 0;    ///< refinements, bisection or search steps
  std::optional<double> p_star;  ///< attaining exponent of sup-type norms
  std::optional<double> bracket_lo, bracket_hi;
  std::string message;
};

inline nlohmann::json to_json(const NormResult& r) {
  nlohmann::json j = {{"value", r.value},
                      {"abs_error_estimate", r.abs_error_estimate},
                      {"converged", r.converged},
                      {"method", r.method},
                      {"cells", r.cells},
                      {"subdivisions", r.subdivisions},
                      {"iterations", r.iterations}};
  if (r.p_star) j["p_star"] = *r.p_star;
  if (r.bracket_lo) j["bracket"] = {*r.bracket_lo, *r.bracket_hi};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

inline constexpr double kDefaultTolerance = 1e-9;

/// ||Delta_emptyset||_{L_p} = (p+1)^{-d/p}.
inline double initial_lp(double p, std::size_t d) {
  if (!(p >= 1.0)) throw std::invalid_argument("initial_lp: p must be >= 1");
  if (d == 0) throw std::invalid_argument("initial_lp: d must be >= 1");
  return std::pow(p + 1.0, -static_cast<double>(d) / p);
}

/// Closed-form L_2 discrepancy (Warnock's formula), O(N^2 d).
inline double warnock_l2(const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const double volume_term = std::pow(3.0, -static_cast<double>(d));
  if (n == 0) return std::sqrt(volume_term);
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < d; ++i) prod *= 0.5 * (1.0 - points(j, i) * points(j, i));
    cross += prod;
  }
  double pair = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double prod = 1.0;
      for (std::size_t i = 0; i < d; ++i) prod *= 1.0 - std::max(points(j, i), points(k, i));
      pair += prod;
    }
  }
  const double nd = static_cast<double>(n);
  return std::sqrt(std::max(0.0, volume_term - 2.0 * cross / nd + pair / (nd * nd)));
}

namespace detail {

inline void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw std::invalid_argument("tolerance must lie in (0, 1e-2]");
}

inline bool is_even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0; }

/// (sum w |v|^p)^{1/p}, scaled by max|v| so large p does not underflow.
inline double lp_of_measure(const DiscreteMeasure& m, double p) {
  const double top = m.max_abs();
  if (top == 0.0) return 0.0;
  const double sum = m.integrate([&](double v) { return std::pow(std::abs(v) / top, p); });
  return top * std::pow(std::max(sum, 0.0), 1.0 / p);
}

struct CompensatedSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

/// Sum over cells of int (c - prod t_i)^p dt for even integer p, by binomial
/// expansion into products of one-dimensional monomial moments. Returns the
/// integral and a bound on its rounding error.
inline std::pair<double, double> even_power_integral(const CellGrid& grid, int p) {
  const std::size_t d = grid.dim();
  // moments[i][k * (p+1) + j] = int_{interval k of axis i} t^j dt
  std::vector<std::vector<double>> moments(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& b = grid.breakpoints(i);
    auto& m = moments[i];
    m.resize((b.size() - 1) * static_cast<std::size_t>(p + 1));
    for (std::size_t k = 0; k + 1 < b.size(); ++k)
      for (int j = 0; j <= p; ++j)
        m[k * static_cast<std::size_t>(p + 1) + static_cast<std::size_t>(j)] =
            (std::pow(b[k + 1], j + 1) - std::pow(b[k], j + 1)) / (j + 1);
  }
  std::vector<double> binom(static_cast<std::size_t>(p + 1), 1.0);
  for (int j = 1; j <= p; ++j) binom[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j - 1)] * (p - j + 1) / j;

  CompensatedSum total;
  double magnitude = 0.0;
  std::vector<std::size_t> index(d, 0);
  std::vector<double> prod(static_cast<std::size_t>(p + 1));
  const std::size_t stride = static_cast<std::size_t>(p + 1);
  for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
    std::fill(prod.begin(), prod.end(), 1.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double* m = moments[i].data() + index[i] * stride;
      for (std::size_t j = 0; j < stride; ++j) prod[j] *= m[j];
    }
    const double c = grid.fraction(flat);
    double cell = 0.0, cell_abs = 0.0, cpow = 1.0;
    for (int j = p; j >= 0; --j) {
      const double term = binom[static_cast<std::size_t>(j)] * cpow * prod[static_cast<std::size_t>(j)];
      cell += (j % 2) ? -term : term;
      cell_abs += term;
      cpow *= c;
    }
    total.add(cell);
    magnitude += cell_abs;
    for (std::size_t i = d; i-- > 0;) {
      if (++index[i] < grid.intervals(i)) break;
      index[i] = 0;
    }
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {total.value(), 4.0 * (p + d + 2) * eps * magnitude};
}

}  // namespace detail

/// L_p norm of Delta_P read off a prebuilt value distribution.
inline NormResult lp_norm(const DeltaDistribution& dist, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  NormResult r;
  r.method = "distribution";
  r.value = detail::lp_of_measure(dist.fine, p);
  r.abs_error_estimate = std::abs(r.value - detail::lp_of_measure(dist.coarse, p));
  r.cells = dist.cells;
  r.subdivisions = dist.pieces;
  r.converged = !dist.budget_exceeded;
  return r;
}

/// L_p discrepancy for real p >= 1 within relative tolerance `tol`.
///
/// Even integer p is integrated exactly; if the rounding bound of the exact
/// expansion is too loose (large p), or p is not an even integer, the value
/// distribution is built and refined until the 4/8-point disagreement is
/// below tol * value. A result that misses tol after the refinement budget
/// is returned with converged = false.
inline NormResult lp_discrepancy(const PointSet& points, double p, double tol = kDefaultTolerance,
                                 int max_refinements = 3) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_discrepancy: p must be >= 1");
  detail::check_tolerance(tol);
  const CellGrid grid = build_cell_grid(points);

  if (detail::is_even_integer(p) && p <= 64) {
    const auto [integral, bound] = detail::even_power_integral(grid, static_cast<int>(p));
    const double value = std::pow(std::max(integral, 0.0), 1.0 / p);
    // d(x^{1/p}) = x^{1/p - 1} dx / p
    const double error = integral > 0.0 ? value * bound / (p * integral) : std::pow(bound, 1.0 / p);
    if (error <= tol * value) {
      NormResult r;
      r.method = "binomial";
      r.value = value;
      r.abs_error_estimate = error;
      r.cells = grid.cell_count();
      return r;
    }
  }

  DistributionOptions opt;
  NormResult r;
  for (int level = 0; level <= max_refinements; ++level) {
    const DeltaDistribution dist = build_delta_distribution(grid, opt);
    r = lp_norm(dist, p);
    r.iterations = static_cast<std::size_t>(level);
    if (r.converged && r.abs_error_estimate <= tol * r.value) return r;
    opt = opt.refined();
  }
  r.converged = false;
  r.message = "relative tolerance not reached within the refinement budget";
  return r;
}

}  // namespace orldisc
