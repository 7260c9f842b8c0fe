#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace orldisc {

/// Weight function phi on [1, inf): nondecreasing, positive, and (for the
/// Orlicz series to converge) unbounded.
///
///   factorial(a)  phi(q) = Gamma(q/a + 1)^{1/q}, so phi(a p)^{a p} = p!
///   power(C, r)   phi(p) = C p^r
///   subexp(tau)   phi(p) = exp(p^tau), 0 < tau < 1
///   tabulated     piecewise linear through (p_k, phi_k), constant outside
class WeightFn {
 public:
  enum class Kind { factorial, power, subexp, tabulated };

  static WeightFn factorial(double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("factorial weight: alpha must be >= 1");
    WeightFn w(Kind::factorial);
    w.a_ = alpha;
    return w;
  }

  static WeightFn power(double c, double r) {
    if (!(c > 0.0) || !(r >= 0.0)) throw std::invalid_argument("power weight: need C > 0 and r >= 0");
    WeightFn w(Kind::power);
    w.a_ = c;
    w.b_ = r;
    return w;
  }

  static WeightFn subexp(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("subexp weight: tau must lie in (0,1)");
    WeightFn w(Kind::subexp);
    w.a_ = tau;
    return w;
  }

  static WeightFn tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw std::invalid_argument("tabulated weight: at least one knot is required");
    std::sort(knots.begin(), knots.end());
    for (std::size_t k = 0; k < knots.size(); ++k) {
      if (!(knots[k].second > 0.0)) throw std::invalid_argument("tabulated weight: values must be positive");
      if (k && knots[k].first == knots[k - 1].first)
        throw std::invalid_argument("tabulated weight: duplicate abscissa");
    }
    WeightFn w(Kind::tabulated);
    w.knots_ = std::move(knots);
    return w;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

  double log_value(double p) const {
    switch (kind_) {
      case Kind::factorial:
        return std::lgamma(p / a_ + 1.0) / p;
      case Kind::power:
        return std::log(a_) + b_ * std::log(p);
      case Kind::subexp:
        return std::pow(p, a_);
      case Kind::tabulated:
        return std::log(tabulated_value(p));
    }
    return 0.0;
  }

  double operator()(double p) const {
    return kind_ == Kind::tabulated ? tabulated_value(p) : std::exp(log_value(p));
  }

  /// sup_{p >= 1} phi(p)^{-2}: attained at p = 1 for nondecreasing phi,
  /// tabulated weights scan their knots.
  double sup_inverse_square() const {
    double lowest = (*this)(1.0);
    if (kind_ == Kind::tabulated)
      for (const auto& [p, v] : knots_)
        if (p >= 1.0) lowest = std::min(lowest, v);
    return 1.0 / (lowest * lowest);
  }

  /// Violated contract properties, empty when phi is admissible: positive,
  /// nondecreasing on a log grid over [1, 1e6], and phi(1e6) > 10 phi(1).
  std::vector<std::string> validate() const {
    std::vector<std::string> issues;
    double prev = (*this)(1.0);
    if (!(prev > 0.0)) issues.emplace_back("not positive at p = 1");
    for (int k = 1; k <= 240; ++k) {
      const double p = std::pow(10.0, 6.0 * k / 240.0);
      const double v = (*this)(p);
      if (!(v > 0.0)) {
        issues.emplace_back("not positive at p = " + std::to_string(p));
        break;
      }
      if (v < prev * (1.0 - 1e-12)) {
        issues.emplace_back("decreasing near p = " + std::to_string(p));
        break;
      }
      prev = v;
    }
    if (!unbounded()) issues.emplace_back("does not grow: phi(1e6) <= 10 phi(1)");
    return issues;
  }

  bool unbounded() const { return (*this)(1e6) > 10.0 * (*this)(1.0); }

  nlohmann::json to_json() const {
    switch (kind_) {
      case Kind::factorial:
        return {{"kind", "factorial"}, {"alpha", a_}};
      case Kind::power:
        return {{"kind", "power"}, {"C", a_}, {"r", b_}};
      case Kind::subexp:
        return {{"kind", "subexp"}, {"tau", a_}};
      case Kind::tabulated: {
        nlohmann::json k = nlohmann::json::array();
        for (const auto& [p, v] : knots_) k.push_back({p, v});
        return {{"kind", "tabulated"}, {"knots", k}};
      }
    }
    return {};
  }

  static WeightFn from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "factorial") return factorial(j.at("alpha").get<double>());
    if (kind == "power") return power(j.value("C", 1.0), j.at("r").get<double>());
    if (kind == "subexp") return subexp(j.at("tau").get<double>());
    if (kind == "tabulated") {
      std::vector<std::pair<double, double>> knots;
      for (const auto& k : j.at("knots")) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
      return tabulated(std::move(knots));
    }
    throw std::invalid_argument("unknown weight kind '" + kind + "'");
  }

 private:
  explicit WeightFn(Kind kind) : kind_(kind) {}

  double tabulated_value(double p) const {
    if (p <= knots_.front().first) return knots_.front().second;
    if (p >= knots_.back().first) return knots_.back().second;
    const auto hi = std::upper_bound(knots_.begin(), knots_.end(), p,
                                     [](double x, const auto& k) { return x < k.first; });
    const auto lo = hi - 1;
    const double s = (p - lo->first) / (hi->first - lo->first);
    return lo->second + s * (hi->second - lo->second);
  }

  Kind kind_;
  double a_ = 0.0, b_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace orldisc
