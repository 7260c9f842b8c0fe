#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace orldisc {

/// N points in the half-open unit cube [0,1)^d, stored row-major.
///
/// Point j, component i lives at coords()[j * dim() + i]. The empty set
/// (size() == 0) is legal and represents the initial discrepancy case.
class PointSet {
 public:
  explicit PointSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("PointSet: dimension must be >= 1");
  }

  PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim == 0) throw std::invalid_argument("PointSet: dimension must be >= 1");
    if (coords_.size() % dim != 0)
      throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      const double x = coords_[k];
      if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("PointSet: coordinate " + std::to_string(x) + " of point " +
                                    std::to_string(k / dim) + " is outside [0,1)");
    }
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const double> point(std::size_t j) const { return {coords_.data() + j * dim_, dim_}; }
  double operator()(std::size_t j, std::size_t i) const { return coords_[j * dim_ + i]; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// Maps a 64-bit word to [0,1) using its top 53 bits.
inline double unit_double(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// splitmix64 finalizer chained over the arguments; per-trial seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

/// n i.i.d. uniform points from std::mt19937_64 seeded with `seed`.
///
/// The engine is bit-exact by the C++ standard and the conversion is done by
/// hand (unit_double) rather than through std::uniform_real_distribution, so
/// the output is identical across standard library implementations.
inline PointSet generate_uniform(std::int64_t n, std::size_t d, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("generate_uniform: n must be >= 0");
  if (d == 0) throw std::invalid_argument("generate_uniform: d must be >= 1");
  std::mt19937_64 engine(seed);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (double& x : coords) x = unit_double(engine());
  return PointSet(d, std::move(coords));
}

inline constexpr std::array<unsigned, 16> kHaltonPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                          23, 29, 31, 37, 41, 43, 47, 53};

/// Van der Corput radical inverse of `index` in `base`.
inline double radical_inverse(std::uint64_t index, unsigned base) noexcept {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

/// First n Halton points (indices 1..n) in the bases of the first d primes.
inline PointSet generate_halton(std::int64_t n, std::size_t d) {
  if (n < 0) throw std::invalid_argument("generate_halton: n must be >= 0");
  if (d == 0 || d > kHaltonPrimes.size())
    throw std::invalid_argument("generate_halton: dimension must be in [1, " +
                                std::to_string(kHaltonPrimes.size()) + "]");
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(n) * d);
  for (std::int64_t j = 1; j <= n; ++j)
    for (std::size_t i = 0; i < d; ++i)
      coords.push_back(radical_inverse(static_cast<std::uint64_t>(j), kHaltonPrimes[i]));
  return PointSet(d, std::move(coords));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Parses one point per line, comma separated. Blank lines are skipped.
///
/// `dim_hint` gives the dimension of an input with no points; when both the
/// hint and data are present they must agree.
inline PointSet load_pointset(std::istream& in, std::size_t dim_hint = 0) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      const auto field = detail::trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw std::invalid_argument("load_pointset: malformed number '" + std::string(field) + "' on line " +
                                    std::to_string(line_no));
      if (!(value >= 0.0 && value < 1.0))
        throw std::invalid_argument("load_pointset: coordinate " + std::string(field) + " on line " +
                                    std::to_string(line_no) + " is outside [0,1)");
      coords.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      dim = fields;
    } else if (fields != dim) {
      throw std::invalid_argument("load_pointset: line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields) + " coordinates, expected " + std::to_string(dim));
    }
  }
  if (dim == 0) {
    if (dim_hint == 0) throw std::invalid_argument("load_pointset: empty input needs an explicit dimension");
    return PointSet(dim_hint);
  }
  if (dim_hint != 0 && dim_hint != dim)
    throw std::invalid_argument("load_pointset: data has dimension " + std::to_string(dim) + ", expected " +
                                std::to_string(dim_hint));
  return PointSet(dim, std::move(coords));
}

inline PointSet load_pointset(std::string_view text, std::size_t dim_hint = 0) {
  std::istringstream in{std::string(text)};
  return load_pointset(in, dim_hint);
}

inline void save_pointset(std::ostream& out, const PointSet& points) {
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < points.dim(); ++i) {
      if (i) out << ',';
      out << detail::format_double(points(j, i));
    }
    out << '\n';
  }
}

inline std::string save_pointset(const PointSet& points) {
  std::ostringstream out;
  save_pointset(out, points);
  return out.str();
}

inline nlohmann::json to_json(const PointSet& points) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto p = points.point(j);
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"dim", points.dim()}, {"points", std::move(rows)}};
}

inline PointSet pointset_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<double> coords;
  for (const auto& row : j.at("points")) {
    if (row.size() != dim) throw std::invalid_argument("pointset_from_json: inconsistent point dimension");
    for (const auto& x : row) coords.push_back(x.get<double>());
  }
  return PointSet(dim, std::move(coords));
}

}  // namespace orldisc
