#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "localdisc.hpp"

namespace orldisc {

/// Work limit for critical-corner enumeration: corners * d.
inline constexpr double kStarWorkLimit = 1e9;

struct StarResult {
  double value = 0.0;
  std::vector<double> corner;  ///< grid corner attaining the supremum
  bool closed = false;         ///< true when attained by the closed-count excess
};

/// Exact star discrepancy sup_t |Delta_P(t)| by critical-corner enumeration.
///
/// Every corner of the grid (coordinates of each axis together with 0 and 1)
/// is checked twice: the open-count deficiency vol(t) - A_open(t)/N, which is
/// the limit from below, and the closed-count excess A_closed(t)/N - vol(t),
/// the limit from above. Counts come from the prefix sums of the cell grid.
inline StarResult star_discrepancy_detail(const PointSet& points) {
  const std::size_t d = points.dim();
  if (points.empty()) return {1.0, std::vector<double>(d, 1.0), false};

  const std::size_t cells = grid_cell_count(points);
  double corners = 1.0;
  for (std::size_t i = 0; i < d; ++i) corners *= static_cast<double>(points.size() + 2);
  if (cells > kMaxGridCells || std::min(corners, static_cast<double>(cells) * std::pow(2.0, d)) * d > kStarWorkLimit)
    throw FeasibilityError("star discrepancy: grid too large for exact enumeration");

  const CellGrid grid = build_cell_grid(points);
  const double n = static_cast<double>(points.size());

  std::vector<std::size_t> k(d, 0);
  std::vector<double> t(d, 0.0);
  StarResult best{-1.0, {}, false};
  while (true) {
    double vol = 1.0;
    bool any_zero = false;
    std::size_t open_flat = 0;
    std::size_t closed_flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto& b = grid.breakpoints(i);
      t[i] = b[k[i]];
      vol *= t[i];
      const std::size_t last = grid.intervals(i) - 1;
      any_zero = any_zero || k[i] == 0;
      if (k[i] > 0) open_flat += (k[i] - 1) * grid.stride(i);
      closed_flat += std::min(k[i], last) * grid.stride(i);
    }
    const double open = any_zero ? 0.0 : grid.count(open_flat) / n;
    const double closed = grid.count(closed_flat) / n;
    if (vol - open > best.value) best = {vol - open, t, false};
    if (closed - vol > best.value) best = {closed - vol, t, true};

    std::size_t axis = d;
    while (axis-- > 0) {
      if (++k[axis] <= grid.intervals(axis)) break;
      k[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

inline double star_discrepancy_exact(const PointSet& points) { return star_discrepancy_detail(points).value; }

/// Largest |Delta_P(t)| over `samples` uniform random corners t; a lower bound.
inline double star_discrepancy_lower_mc(const PointSet& points, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("star_discrepancy_lower_mc: samples must be >= 1");
  std::mt19937_64 engine(seed);
  std::vector<double> t(points.dim());
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& ti : t) ti = unit_double(engine());
    best = std::max(best, std::abs(local_discrepancy(points, t)));
  }
  return best;
}

}  // namespace orldisc
