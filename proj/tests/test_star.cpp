#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <orldisc/star.hpp>

using namespace orldisc;

namespace {

// Direct enumeration without the cell grid: open and closed counts by scanning.
double star_brute_force(const PointSet& p) {
  const std::size_t d = p.dim();
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    axes[i].push_back(1.0);
    for (std::size_t j = 0; j < p.size(); ++j) axes[i].push_back(p(j, i));
  }
  std::vector<std::size_t> k(d, 0);
  double best = 0.0;
  const double n = static_cast<double>(p.size());
  while (true) {
    double vol = 1.0;
    for (std::size_t i = 0; i < d; ++i) vol *= axes[i][k[i]];
    double open = 0.0, closed = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      bool lt = true, le = true;
      for (std::size_t i = 0; i < d; ++i) {
        lt = lt && p(j, i) < axes[i][k[i]];
        le = le && p(j, i) <= axes[i][k[i]];
      }
      open += lt;
      closed += le;
    }
    best = std::max({best, vol - open / n, closed / n - vol});
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++k[axis] < axes[axis].size()) break;
      k[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

// Classical one-dimensional formula 1/(2N) + max |x_(i) - (2i-1)/(2N)|.
double star_one_dim(const PointSet& p) {
  std::vector<double> x(p.coords().begin(), p.coords().end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(x[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n)));
  return 0.5 / n + worst;
}

}  // namespace

TEST(StarDiscrepancy, SingleMidpoint) { EXPECT_EQ(star_discrepancy_exact(PointSet(1, {0.5})), 0.5); }

TEST(StarDiscrepancy, EmptySetIsOne) {
  for (std::size_t d = 1; d <= 5; ++d) EXPECT_EQ(star_discrepancy_exact(PointSet(d)), 1.0);
}

TEST(StarDiscrepancy, CenteredGrid) {
  for (int n : {1, 2, 4, 8}) {
    std::vector<double> x;
    for (int k = 0; k < n; ++k) x.push_back(1.0 / (2.0 * n) + static_cast<double>(k) / n);
    EXPECT_EQ(star_discrepancy_exact(PointSet(1, x)), 1.0 / (2.0 * n)) << "N=" << n;
  }
}

TEST(StarDiscrepancy, OneDimensionClosedForm) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PointSet p = generate_uniform(1 + static_cast<std::int64_t>(seed), 1, seed);
    EXPECT_NEAR(star_discrepancy_exact(p), star_one_dim(p), 1e-15);
  }
}

TEST(StarDiscrepancy, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PointSet p = generate_uniform(1 + static_cast<std::int64_t>(seed % 10), 1 + seed % 3, seed + 50);
    EXPECT_NEAR(star_discrepancy_exact(p), star_brute_force(p), 1e-15);
  }
}

TEST(StarDiscrepancy, DuplicatesAndZeroCoordinates) {
  const PointSet p(2, {0.0, 0.5, 0.0, 0.5, 0.25, 0.0, 0.75, 0.75});
  EXPECT_NEAR(star_discrepancy_exact(p), star_brute_force(p), 1e-15);
}

TEST(StarDiscrepancy, DominatesMonteCarlo) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointSet p = generate_uniform(1 + static_cast<std::int64_t>(seed % 32), 1 + seed % 3, seed);
    EXPECT_GE(star_discrepancy_exact(p), star_discrepancy_lower_mc(p, 2000, seed));
  }
}

TEST(StarDiscrepancy, DetailReportsCorner) {
  const StarResult r = star_discrepancy_detail(PointSet(1, {0.5}));
  EXPECT_EQ(r.value, 0.5);
  ASSERT_EQ(r.corner.size(), 1u);
  EXPECT_EQ(r.corner[0], 0.5);
}

TEST(StarDiscrepancy, InvariantUnderPermutations) {
  const PointSet p = generate_uniform(15, 3, 77);
  const double base = star_discrepancy_exact(p);
  std::vector<double> reversed, swapped;
  for (std::size_t j = p.size(); j-- > 0;)
    for (std::size_t i = 0; i < 3; ++i) reversed.push_back(p(j, i));
  for (std::size_t j = 0; j < p.size(); ++j) {
    swapped.push_back(p(j, 2));
    swapped.push_back(p(j, 0));
    swapped.push_back(p(j, 1));
  }
  EXPECT_EQ(star_discrepancy_exact(PointSet(3, reversed)), base);
  EXPECT_NEAR(star_discrepancy_exact(PointSet(3, swapped)), base, 1e-15);
}

TEST(StarDiscrepancy, InfeasibleSizeThrows) {
  EXPECT_THROW(star_discrepancy_exact(generate_uniform(2000, 4, 1)), FeasibilityError);
}

TEST(StarMonteCarlo, EmptySetApproachesOne) {
  EXPECT_GE(star_discrepancy_lower_mc(PointSet(2), 100000, 3), 0.99);
}

TEST(StarMonteCarlo, MidpointWithinOnePercent) {
  EXPECT_NEAR(star_discrepancy_lower_mc(PointSet(1, {0.5}), 10000, 3), 0.5, 0.01);
  EXPECT_THROW(star_discrepancy_lower_mc(PointSet(1), 0, 1), std::invalid_argument);
}
