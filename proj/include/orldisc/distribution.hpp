#pragma once

// Value distribution of the local discrepancy function.
//
// Every functional this library integrates over the unit cube has the form
// int g(Delta_P(t)) dt with g depending on the value only (|x|^p, psi(|x|/K)).
// Such integrals equal int g dnu where nu is the image of Lebesgue measure
// under Delta_P. We build a quadrature for nu once and reuse it for every p
// and every K.
//
// On a cell of the grid, Delta_P(t) = c - prod_i t_i with c constant. With
// y = log(prod b_i) - log(prod t_i) the image measure of the cell is
//
//   b e^{-y} h(y) dy,   b = prod_i b_i,
//
// where h is the density of a sum of independent uniform variables on
// [0, log(b_i/a_i)] (an unbounded ray on axes with a_i = 0). h is a piecewise
// polynomial of degree d-1 with breakpoints at subset sums of the interval
// lengths, so each cell reduces to a handful of one-dimensional Gauss-Legendre
// integrals. The sign change of Delta_P sits at the single point
// y* = log(b/c), which becomes a breakpoint with geometric grading around it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "localdisc.hpp"
#include "quadrature.hpp"

namespace orldisc {

struct DistributionOptions {
  double max_width = 0.125;            ///< widest piece (in y) near the top of a cell
  int kink_levels = 14;                ///< geometric grading steps toward the sign change
  double tail_depth = 64.0;            ///< truncation depth of unbounded cells
  std::size_t compress_order = 8;      ///< Gauss nodes per value bin after compression
  std::size_t max_pieces_per_cell = std::size_t{1} << 20;

  DistributionOptions refined() const {
    DistributionOptions r = *this;
    r.max_width *= 0.5;
    r.kink_levels += 4;
    return r;
  }
};

/// Two quadratures of the value distribution built on the same partition:
/// `fine` from 8-point and `coarse` from 4-point Gauss-Legendre pieces. Their
/// disagreement on a functional is the reported error estimate.
struct DeltaDistribution {
  DiscreteMeasure fine;
  DiscreteMeasure coarse;
  std::size_t dim = 0;
  std::size_t cells = 0;
  std::size_t pieces = 0;
  std::size_t raw_nodes = 0;
  bool budget_exceeded = false;
  DistributionOptions options;
};

namespace detail {

/// Buckets atoms by value and compresses each bucket into a Gauss rule once it
/// grows past a threshold, so memory stays bounded by the number of buckets.
class BinnedCompressor {
 public:
  explicit BinnedCompressor(std::size_t order) : order_(order), bins_(2 * kSideBins) {}

  void add(double v, double w) {
    if (!(w > 0.0)) return;
    Bin& bin = bins_[index(v)];
    bin.x.push_back(v);
    bin.w.push_back(w);
    if (bin.x.size() >= kFlushSize) compress(bin);
  }

  DiscreteMeasure finish() {
    DiscreteMeasure out;
    for (Bin& bin : bins_) {
      if (bin.x.size() > order_) compress(bin);
      out.values.insert(out.values.end(), bin.x.begin(), bin.x.end());
      out.weights.insert(out.weights.end(), bin.w.begin(), bin.w.end());
    }
    return out;
  }

 private:
  struct Bin {
    std::vector<double> x, w;
  };

  static constexpr std::size_t kUniform = 512;
  static constexpr std::size_t kGeometric = 1100;
  static constexpr std::size_t kSideBins = kUniform + kGeometric;
  static constexpr std::size_t kFlushSize = 4096;

  static std::size_t index(double v) {
    const double a = std::abs(v);
    std::size_t k;
    if (a >= 1.0 / kUniform) {
      k = std::min(static_cast<std::size_t>(a * kUniform), kUniform - 1);
    } else if (a == 0.0) {
      k = kSideBins - 1;
    } else {
      int e = 0;
      std::frexp(a, &e);  // a in [2^(e-1), 2^e), e <= -9
      k = std::min(kUniform + static_cast<std::size_t>(-9 - e), kSideBins - 1);
    }
    return (v < 0.0 ? kSideBins : 0) + k;
  }

  void compress(Bin& bin) {
    const auto [lo, hi] = std::minmax_element(bin.x.begin(), bin.x.end());
    std::vector<double> nx, nw;
    gauss_compress(bin.x, bin.w, *lo, *hi, order_, nx, nw);
    bin.x = std::move(nx);
    bin.w = std::move(nw);
  }

  std::size_t order_;
  std::vector<Bin> bins_;
};

/// Density in y of the image measure of one cell, before the b e^{-y} factor.
class CellDensity {
 public:
  CellDensity(std::span<const double> lower, std::span<const double> upper) : d_(lower.size()) {
    std::vector<double> lengths;
    for (std::size_t i = 0; i < d_; ++i) {
      if (lower[i] > 0.0) lengths.push_back(std::log(upper[i] / lower[i]));
    }
    bounded_ = lengths.size() == d_;
    const std::size_t subsets = std::size_t{1} << lengths.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      double s = 0.0;
      int parity = 0;
      for (std::size_t i = 0; i < lengths.size(); ++i)
        if (mask & (std::size_t{1} << i)) {
          s += lengths[i];
          parity ^= 1;
        }
      shifts_.push_back(s);
      signs_.push_back(parity ? -1.0 : 1.0);
    }
    top_ = *std::max_element(shifts_.begin(), shifts_.end());
    factorial_ = 1.0;
    for (std::size_t k = 2; k < d_; ++k) factorial_ *= static_cast<double>(k);

    // Beyond the last breakpoint the alternating sum of (y - W)^(d-1) is a
    // polynomial whose low-order coefficients vanish identically; keep only
    // the surviving ones to avoid cancellation deep in the tail.
    const std::size_t finite = lengths.size();
    tail_coeffs_.assign(d_, 0.0);
    for (std::size_t j = finite; j < d_; ++j) {
      double tj = 0.0;
      for (std::size_t s = 0; s < shifts_.size(); ++s) tj += signs_[s] * std::pow(shifts_[s], static_cast<double>(j));
      double binom = 1.0;
      for (std::size_t q = 0; q < j; ++q) binom = binom * static_cast<double>(d_ - 1 - q) / static_cast<double>(q + 1);
      tail_coeffs_[d_ - 1 - j] = binom * ((j % 2) ? -tj : tj) / factorial_;
    }
  }

  bool bounded() const noexcept { return bounded_; }
  /// Upper end of the support when bounded, else the last breakpoint.
  double top() const noexcept { return top_; }
  std::span<const double> breakpoints() const noexcept { return shifts_; }

  double operator()(double y) const {
    if (y >= top_) {
      if (bounded_) return 0.0;
      double acc = 0.0;
      for (std::size_t k = d_; k-- > 0;) acc = acc * y + tail_coeffs_[k];
      return acc;
    }
    const double e = static_cast<double>(d_ - 1);
    double acc = 0.0;
    for (std::size_t s = 0; s < shifts_.size(); ++s) {
      const double z = y - shifts_[s];
      if (z > 0.0) acc += signs_[s] * (d_ == 1 ? 1.0 : std::pow(z, e));
    }
    return std::max(acc / factorial_, 0.0);
  }

 private:
  std::size_t d_;
  bool bounded_ = true;
  double top_ = 0.0;
  double factorial_ = 1.0;
  std::vector<double> shifts_;
  std::vector<double> signs_;
  std::vector<double> tail_coeffs_;  // ascending powers of y
};

struct Piece {
  double lo, hi;
};

/// Pieces near the top of a cell are at most max_width wide; deeper in the
/// tail the measure decays like e^{-y} and pieces may widen.
inline double allowed_width(double y, const DistributionOptions& opt) {
  return std::min(opt.max_width * std::exp(std::max(y, 0.0) / 9.0), 4.0);
}

inline void split_piece(double lo, double hi, const DistributionOptions& opt, std::vector<Piece>& out) {
  double start = lo;
  while (hi > start) {
    const double w = allowed_width(start, opt);
    const double end = hi - start <= 1.25 * w ? hi : start + w;
    out.push_back({start, end});
    start = end;
  }
}

/// Splits [lo, hi] with geometric grading toward `kink` (one of the endpoints).
inline void split_graded(double lo, double hi, double kink, const DistributionOptions& opt,
                         std::vector<Piece>& out) {
  const double width = hi - lo;
  double near = width;
  std::vector<Piece> graded;
  for (int level = 0; level < opt.kink_levels; ++level) {
    const double next = near * 0.5;
    if (kink == lo)
      graded.push_back({lo + next, lo + near});
    else
      graded.push_back({hi - near, hi - next});
    near = next;
  }
  if (kink == lo)
    graded.push_back({lo, lo + near});
  else
    graded.push_back({hi - near, hi});
  for (const Piece& g : graded) split_piece(g.lo, g.hi, opt, out);
}

}  // namespace detail

/// Builds the value distribution of Delta_P over the cells of `grid`.
inline DeltaDistribution build_delta_distribution(const CellGrid& grid,
                                                  const DistributionOptions& opt = {}) {
  const std::size_t d = grid.dim();
  const auto& g8 = gauss_legendre_cached(8);
  const auto& g4 = gauss_legendre_cached(4);

  DeltaDistribution dist;
  dist.dim = d;
  dist.cells = grid.cell_count();
  dist.options = opt;
  detail::BinnedCompressor fine(opt.compress_order), coarse(opt.compress_order);

  std::vector<std::size_t> index(d);
  std::vector<double> lower(d), upper(d);
  std::vector<double> cuts;
  std::vector<detail::Piece> pieces;

  for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
    grid.unflatten(flat, index);
    double log_top = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      lower[i] = grid.breakpoints(i)[index[i]];
      upper[i] = grid.breakpoints(i)[index[i] + 1];
      log_top += std::log(upper[i]);
    }
    const double c = grid.fraction(flat);
    const double top_volume = std::exp(log_top);
    const detail::CellDensity density(lower, upper);

    const double y_end = density.bounded() ? density.top() : density.top() + opt.tail_depth;
    cuts.assign(density.breakpoints().begin(), density.breakpoints().end());
    cuts.push_back(0.0);
    cuts.push_back(y_end);
    double kink = -1.0;
    if (c > 0.0) {
      // A sign change exactly at the top corner (c = 1 in the last cell) is
      // graded too.
      kink = log_top - std::log(c);
      if (kink <= 0.0 && kink > -1e-12) kink = 0.0;
      if (kink >= 0.0 && kink < y_end) cuts.push_back(kink);
      else kink = -1.0;
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    pieces.clear();
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k], hi = cuts[k + 1];
      if (hi > y_end || !(hi > lo)) continue;
      if (lo == kink || hi == kink)
        detail::split_graded(lo, hi, kink, opt, pieces);
      else
        detail::split_piece(lo, hi, opt, pieces);
    }
    if (pieces.size() > opt.max_pieces_per_cell) dist.budget_exceeded = true;
    dist.pieces += pieces.size();

    for (const auto& piece : pieces) {
      const double mid = 0.5 * (piece.lo + piece.hi);
      const double half = 0.5 * (piece.hi - piece.lo);
      for (std::size_t q = 0; q < 8; ++q) {
        const double y = mid + half * g8.nodes[q];
        fine.add(c - top_volume * std::exp(-y), half * g8.weights[q] * top_volume * std::exp(-y) * density(y));
      }
      for (std::size_t q = 0; q < 4; ++q) {
        const double y = mid + half * g4.nodes[q];
        coarse.add(c - top_volume * std::exp(-y), half * g4.weights[q] * top_volume * std::exp(-y) * density(y));
      }
      dist.raw_nodes += 12;
    }
  }
  dist.fine = fine.finish();
  dist.coarse = coarse.finish();
  return dist;
}

inline DeltaDistribution build_delta_distribution(const PointSet& points, const DistributionOptions& opt = {}) {
  return build_delta_distribution(build_cell_grid(points), opt);
}

/// Exact distribution of a function that is constant on each cell of `grid`.
inline DeltaDistribution piecewise_constant_distribution(const CellGrid& grid, std::span<const double> values) {
  if (values.size() != grid.cell_count())
    throw std::invalid_argument("piecewise_constant_distribution: one value per cell is required");
  DeltaDistribution dist;
  dist.dim = grid.dim();
  dist.cells = grid.cell_count();
  for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) dist.fine.add(values[flat], grid.cell_volume(flat));
  dist.coarse = dist.fine;
  return dist;
}

}  // namespace orldisc
