#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pointset.hpp"

namespace orldisc {

/// Largest cell count any exact engine will allocate.
inline constexpr std::size_t kMaxGridCells = std::size_t{1} << 28;

inline void check_box_corner(const PointSet& points, std::span<const double> t) {
  if (t.size() != points.dim())
    throw std::invalid_argument("corner has dimension " + std::to_string(t.size()) + ", point set has " +
                                std::to_string(points.dim()));
  for (double ti : t)
    if (!(ti >= 0.0 && ti <= 1.0)) throw std::invalid_argument("corner coordinate outside [0,1]");
}

/// Number of points in the half-open box [0, t).
inline std::size_t count_in_box(const PointSet& points, std::span<const double> t) {
  check_box_corner(points, t);
  std::size_t count = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    bool inside = true;
    for (std::size_t i = 0; i < points.dim() && inside; ++i) inside = points(j, i) < t[i];
    count += inside;
  }
  return count;
}

inline double box_volume(std::span<const double> t) {
  double v = 1.0;
  for (double ti : t) v *= ti;
  return v;
}

/// Local discrepancy #{x_j in [0,t)}/N - vol([0,t]); the empty set gives -vol.
inline double local_discrepancy(const PointSet& points, std::span<const double> t) {
  const std::size_t count = count_in_box(points, t);
  const double fraction = points.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(points.size());
  return fraction - box_volume(t);
}

/// Product grid on which the counting term of the local discrepancy is constant.
///
/// Axis i is cut at 0, every distinct coordinate of that axis, and 1. Cells are
/// indexed row-major with the last axis varying fastest. count(k) is the number
/// of points in [0,t) for every t in the open cell k, which equals the number
/// of points lying componentwise at or below the cell's lower corner.
class CellGrid {
 public:
  CellGrid(std::vector<std::vector<double>> breakpoints, std::vector<std::uint32_t> counts, std::size_t n_points)
      : breakpoints_(std::move(breakpoints)), counts_(std::move(counts)), n_points_(n_points) {
    std::size_t total = 1;
    strides_.assign(breakpoints_.size(), 0);
    for (std::size_t i = breakpoints_.size(); i-- > 0;) {
      const auto& b = breakpoints_[i];
      if (b.size() < 2 || b.front() != 0.0 || b.back() != 1.0 || !std::is_sorted(b.begin(), b.end()) ||
          std::adjacent_find(b.begin(), b.end()) != b.end())
        throw std::invalid_argument("CellGrid: breakpoints must increase strictly from 0 to 1");
      strides_[i] = total;
      total *= b.size() - 1;
    }
    if (counts_.size() != total) throw std::invalid_argument("CellGrid: count array does not match the grid");
  }

  std::size_t dim() const noexcept { return breakpoints_.size(); }
  std::size_t n_points() const noexcept { return n_points_; }
  std::size_t cell_count() const noexcept { return counts_.size(); }
  std::size_t intervals(std::size_t axis) const { return breakpoints_[axis].size() - 1; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  const std::vector<double>& breakpoints(std::size_t axis) const { return breakpoints_[axis]; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::uint32_t count(std::size_t flat) const { return counts_[flat]; }

  std::uint32_t count(std::span<const std::size_t> index) const { return counts_[flatten(index)]; }

  std::size_t flatten(std::span<const std::size_t> index) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dim(); ++i) flat += index[i] * strides_[i];
    return flat;
  }

  void unflatten(std::size_t flat, std::span<std::size_t> index) const {
    for (std::size_t i = 0; i < dim(); ++i) {
      index[i] = flat / strides_[i];
      flat %= strides_[i];
    }
  }

  /// Counting term count/N of the cell (0 for the empty set).
  double fraction(std::size_t flat) const {
    return n_points_ == 0 ? 0.0 : static_cast<double>(counts_[flat]) / static_cast<double>(n_points_);
  }

  double cell_volume(std::size_t flat) const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      const std::size_t k = flat / strides_[i];
      flat %= strides_[i];
      v *= breakpoints_[i][k + 1] - breakpoints_[i][k];
    }
    return v;
  }

 private:
  std::vector<std::vector<double>> breakpoints_;
  std::vector<std::size_t> strides_;
  std::vector<std::uint32_t> counts_;
  std::size_t n_points_;
};

/// Number of cells build_cell_grid would allocate, without allocating.
inline std::size_t grid_cell_count(const PointSet& points) {
  std::size_t total = 1;
  std::vector<double> axis;
  for (std::size_t i = 0; i < points.dim(); ++i) {
    axis.clear();
    for (std::size_t j = 0; j < points.size(); ++j) axis.push_back(points(j, i));
    std::sort(axis.begin(), axis.end());
    const auto distinct = static_cast<std::size_t>(std::unique(axis.begin(), axis.end()) - axis.begin());
    const std::size_t cuts = distinct + 1 - (distinct > 0 && axis.front() == 0.0);
    if (total > kMaxGridCells / cuts) return kMaxGridCells + 1;
    total *= cuts;
  }
  return total;
}

inline CellGrid build_cell_grid(const PointSet& points) {
  const std::size_t d = points.dim();
  if (grid_cell_count(points) > kMaxGridCells)
    throw FeasibilityError("cell grid exceeds " + std::to_string(kMaxGridCells) + " cells");

  std::vector<std::vector<double>> breakpoints(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto& b = breakpoints[i];
    b.push_back(0.0);
    for (std::size_t j = 0; j < points.size(); ++j) b.push_back(points(j, i));
    b.push_back(1.0);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }

  std::vector<std::size_t> strides(d);
  std::size_t total = 1;
  for (std::size_t i = d; i-- > 0;) {
    strides[i] = total;
    total *= breakpoints[i].size() - 1;
  }

  // Occupancy histogram keyed by the cell whose lower corner is the point.
  std::vector<std::uint32_t> counts(total, 0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto& b = breakpoints[i];
      const auto k = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), points(j, i)) - b.begin());
      flat += k * strides[i];
    }
    ++counts[flat];
  }

  // Inclusive prefix sums along every axis.
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t n = breakpoints[i].size() - 1;
    const std::size_t s = strides[i];
    for (std::size_t flat = 0; flat < total; ++flat) {
      if ((flat / s) % n != 0) counts[flat] += counts[flat - s];
    }
  }
  return CellGrid(std::move(breakpoints), std::move(counts), points.size());
}

}  // namespace orldisc
