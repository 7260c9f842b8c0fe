#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace orldisc {

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1], ascending
  std::vector<double> weights;  ///< sum to 2
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Cached Gauss-Legendre rules of the two orders the integrators pair up.
inline const GaussRule& gauss_legendre_cached(std::size_t n) {
  static const GaussRule g4 = gauss_legendre(4);
  static const GaussRule g8 = gauss_legendre(8);
  if (n == 4) return g4;
  if (n == 8) return g8;
  throw std::invalid_argument("gauss_legendre_cached: only orders 4 and 8 are cached");
}

/// Finite positive measure sum_k weights[k] * delta(values[k]).
struct DiscreteMeasure {
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const noexcept { return values.size(); }
  void add(double v, double w) {
    values.push_back(v);
    weights.push_back(w);
  }
  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// Compensated sum of w * g(v).
  template <class F>
  double integrate(F&& g) const {
    double sum = 0.0, carry = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double term = weights[k] * g(values[k]);
      const double t = sum + term;
      carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
    return sum + carry;
  }
};

/// Replaces the atoms (x_k, w_k), all inside [lo, hi], by an m-point Gauss rule
/// of the same discrete measure. Moments of degree < 2m are preserved, nodes
/// stay inside [lo, hi], and weights stay positive. The recurrence comes from
/// the discretized Stieltjes procedure on the affinely mapped atoms.
inline void gauss_compress(std::span<const double> x, std::span<const double> w, double lo, double hi,
                           std::size_t m, std::vector<double>& out_x, std::vector<double>& out_w) {
  const std::size_t n = x.size();
  if (n <= m) {
    out_x.insert(out_x.end(), x.begin(), x.end());
    out_w.insert(out_w.end(), w.begin(), w.end());
    return;
  }
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> s(n), p_prev(n, 0.0), p_cur(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) s[k] = half > 0 ? (x[k] - mid) / half : 0.0;

  std::vector<double> alpha, beta;
  double norm_prev = 1.0;
  double norm0 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double norm = 0.0, first = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double wp = w[k] * p_cur[k] * p_cur[k];
      norm += wp;
      first += wp * s[k];
    }
    if (j == 0) norm0 = norm;
    // Support exhausted: fewer distinct atoms than requested nodes.
    if (!(norm > 1e-26 * norm0)) break;
    alpha.push_back(first / norm);
    beta.push_back(j == 0 ? norm : norm / norm_prev);
    norm_prev = norm;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = (s[k] - alpha[j]) * p_cur[k] - (j == 0 ? 0.0 : beta[j]) * p_prev[k];
      p_prev[k] = p_cur[k];
      p_cur[k] = next;
    }
  }

  const std::size_t r = alpha.size();
  if (r == 1) {
    out_x.push_back(mid + half * alpha[0]);
    out_w.push_back(beta[0]);
    return;
  }
  Eigen::VectorXd diag(r), sub(r - 1);
  for (std::size_t j = 0; j < r; ++j) diag[j] = alpha[j];
  for (std::size_t j = 1; j < r; ++j) sub[j - 1] = std::sqrt(beta[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (std::size_t j = 0; j < r; ++j) {
    const double node = std::clamp(values[j], -1.0, 1.0);
    const double v0 = vectors(0, static_cast<Eigen::Index>(j));
    out_x.push_back(mid + half * node);
    out_w.push_back(beta[0] * v0 * v0);
  }
}

}  // namespace orldisc
