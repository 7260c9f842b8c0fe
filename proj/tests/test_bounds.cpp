#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <orldisc/bounds.hpp>

using namespace orldisc;

TEST(Stirling, HoldsOnLinearAndLogRange) {
  for (std::int64_t p = 1; p <= 170; ++p) EXPECT_TRUE(stirling_check(p).holds) << "p=" << p;
  for (std::int64_t p : {1000, 100000, 10000000}) EXPECT_TRUE(stirling_check(p).holds) << "p=" << p;
}

TEST(Stirling, PEqualsOneValues) {
  const BoundReport r = stirling_check(1);
  const auto linear = r.params.at("linear");
  EXPECT_NEAR(linear[0].get<double>(), std::sqrt(2.0 * std::numbers::pi) / std::numbers::e, 1e-15);
  EXPECT_NEAR(linear[0].get<double>(), 0.9221370088957891, 1e-12);
  EXPECT_NEAR(linear[1].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(linear[2].get<double>(), 1.0022744491822, 1e-12);
  EXPECT_FALSE(stirling_check(1000).params.contains("linear"));
  EXPECT_THROW(stirling_check(0), std::invalid_argument);
}

TEST(Theorem2, Constants) {
  const double s = std::sqrt(2.0 * std::numbers::pi) / std::exp(11.0 / 12.0);
  EXPECT_NEAR(theorem2_constant(1), 2601.0 * s * s, 1e-9);
  EXPECT_NEAR(theorem2_constant(1), 2612.84514, 1e-5);
  EXPECT_NEAR(theorem2_constant(2), 2601.0 * 2.0 * s, 1e-9);
  EXPECT_NEAR(theorem2_constant(2), 5213.83168, 1e-5);
  // the limit 2601 is approached like 5202 log(alpha) / alpha
  const double gap = theorem2_constant(1e6) - 2601.0;
  EXPECT_NEAR(gap, 2601.0 * std::expm1(2e-6 * std::log(1e6 / stirling_lower_constant())), 1e-9);
  EXPECT_LT(gap / 2601.0, 1e-3);
  EXPECT_LT(theorem2_constant(1e9) - 2601.0, 1e-3);
  EXPECT_THROW(theorem2_constant(0.5), std::invalid_argument);
}

TEST(Theorem2, NBoundExample) {
  const IntegerBound b = theorem2_n_bound(2, 0.5, 1);
  const double real = theorem2_constant(2) * std::log(2.0) * 4.0;
  EXPECT_EQ(b.value, static_cast<std::uint64_t>(std::ceil(real)));
  EXPECT_EQ(b.value, 14456u);
  EXPECT_FALSE(b.saturated);
}

TEST(Theorem2, Monotonicity) {
  for (double alpha : {1.0, 2.0, 5.0}) {
    EXPECT_LT(theorem2_n_bound(alpha, 0.9, 3).value, theorem2_n_bound(alpha, 0.1, 3).value);
    std::uint64_t prev = 0;
    for (std::int64_t d = 1; d <= 1000; d = d * 3 / 2 + 1) {
      const auto v = theorem2_n_bound(alpha, 0.3, d).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Theorem2, Saturates) {
  const IntegerBound b = theorem2_n_bound(1, 1e-12, 1000000000);
  EXPECT_TRUE(b.saturated);
  EXPECT_EQ(b.value, std::numeric_limits<std::uint64_t>::max());
  EXPECT_THROW(theorem2_n_bound(2, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(theorem2_n_bound(2, 0.5, 0), std::invalid_argument);
}

TEST(Theorem2, AdjustedEps) {
  EXPECT_NEAR(psi_alpha_adjusted_eps(2, 0.5), 0.5 * std::sqrt(stirling_lower_constant() / 2.0), 1e-15);
}

TEST(NBound1, Example) {
  const IntegerBound b = nbound1(0.5, 2, WeightFn::power(1, 1));
  EXPECT_EQ(b.value, static_cast<std::uint64_t>(std::ceil(2.5287 * 2.5287 * 2 * 9 * 4 * 4)));
  EXPECT_EQ(b.value, 1842u);
}

TEST(NBound1, PolynomialExponent) {
  for (double r : {0.0, 0.5, 1.0}) {
    std::vector<double> d, log_n;
    for (int k = 3; k <= 10; ++k) {
      d.push_back(std::pow(2.0, k));
      log_n.push_back(nbound1(0.5, std::int64_t{1} << k, WeightFn::power(1, r)).log_value);
    }
    EXPECT_NEAR(loglog_slope(d, log_n), 3.0 + 2.0 * r, 0.1) << "r=" << r;
  }
}

TEST(NBound1, WeakTractability) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::int64_t d : {10, 100, 1000, 10000, 100000}) {
    const double eps = 1.0 / static_cast<double>(d);
    const double ratio = nbound1(eps, d, WeightFn::subexp(0.5)).log_value / (static_cast<double>(d) + 1.0 / eps);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(LoglogSlope, ExactPowerLaw) {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(std::log(3.0) + 2.5 * std::log(v));
  EXPECT_NEAR(loglog_slope(x, y), 2.5, 1e-14);
  EXPECT_THROW(loglog_slope({1}, {0}), std::invalid_argument);
}

TEST(InitialLower, Examples) {
  EXPECT_DOUBLE_EQ(initial_phi_lower(1, WeightFn::power(1, 0)), 0.5);
  EXPECT_NEAR(initial_alpha_lower(20, 1), 1.0 / (80.0 * std::log(21.0)), 1e-16);
  EXPECT_NEAR(initial_alpha_lower(20, 1), 0.004106, 1e-6);
  EXPECT_THROW(initial_alpha_lower(1, 1), std::invalid_argument);
}

TEST(InitialLower, DominatedByInitialNorms) {
  for (std::int64_t d = 1; d <= 8; ++d)
    for (const WeightFn& phi : {WeightFn::power(1, 0.5), WeightFn::subexp(0.5)})
      EXPECT_GE(phi_norm(PointSet(static_cast<std::size_t>(d)), phi).value, initial_phi_lower(d, phi));
  for (std::int64_t d : {2, 5, 20})
    EXPECT_GE(alpha_norm(PointSet(static_cast<std::size_t>(d)), 1.0).value, initial_alpha_lower(d, 1.0));
}

TEST(MinConst, ArgminAndValue) {
  const BoundReport r = min_const_check();
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.params.at("argmin").get<std::int64_t>(), 20);
  EXPECT_NEAR(r.params.at("min").get<double>(), 0.257944, 1e-6);
  EXPECT_GE(min_const_g(1), 0.25);
}

TEST(Construction, Examples) {
  const BoundReport a = construction_constants_check(12.75);
  EXPECT_TRUE(a.holds);
  EXPECT_EQ(a.params.at("sixteen_a_squared").get<double>(), 2601.0);
  const BoundReport b = construction_constants_check(1.0);
  EXPECT_FALSE(b.holds);
  EXPECT_NEAR(b.params.at("first_term").get<double>(), 1.043, 1e-3);
  const BoundReport c = construction_constants_check(100.0);
  EXPECT_TRUE(c.holds);
  EXPECT_GT(c.margin, a.margin);
  EXPECT_THROW(construction_constants_check(0.0), std::invalid_argument);
}

TEST(Lemma1, ConstantsOrdered) {
  for (double alpha : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    const SandwichConstants c = lemma1_psi_alpha_constants(alpha);
    EXPECT_LT(c.lower, c.upper);
    const SandwichConstants g = lemma1_phi_constants(WeightFn::power(1, 1), alpha);
    EXPECT_NEAR(g.lower, 1.0 / alpha, 1e-15);
    EXPECT_NEAR(g.upper, std::pow(2.0, 1.0 / alpha), 1e-15);
  }
}

TEST(Lemma1, SandwichOnSeededSets) {
  for (std::uint64_t k = 0; k < 6; ++k) {
    const PointSet p = generate_uniform(8, 1 + k % 3, derive_seed(99, k));
    for (double alpha : {1.0, 3.0}) {
      EXPECT_TRUE(lemma1_sandwich_check(p, alpha).holds);
      EXPECT_TRUE(lemma1_sandwich_check(p, alpha, WeightFn::subexp(0.5)).holds);
    }
  }
}

TEST(Hnww, HoldsAndIsDeterministic) {
  const BoundReport a = hnww_empirical_check(2, 32, 8, 5);
  EXPECT_TRUE(a.holds) << a.params.dump();
  EXPECT_TRUE(a.params.at("probabilistic").get<bool>());
  const BoundReport b = hnww_empirical_check(2, 32, 8, 5);
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_EQ(a.params.at("mean_Ld").get<double>(), b.params.at("mean_Ld").get<double>());
  EXPECT_THROW(hnww_empirical_check(4, 8, 1, 1), std::invalid_argument);
  EXPECT_THROW(hnww_empirical_check(1, 200, 1, 1), std::invalid_argument);
}

TEST(InverseSearch, StarOneDimension) {
  // Halton {0.5} already has D* = 0.5
  const InverseSearch s = empirical_inverse_discrepancy(NormSpec::star_norm(), 0.5, 1, 2, 1);
  EXPECT_EQ(s.n, 1);
  EXPECT_FALSE(s.capped);
  EXPECT_LE(s.achieved, 0.5);
}

TEST(InverseSearch, SmallerEpsNeedsMorePoints) {
  const NormSpec norm = NormSpec::lp_norm(2);
  std::int64_t prev = 0;
  for (double eps : {0.5, 0.25, 0.1}) {
    const InverseSearch s = empirical_inverse_discrepancy(norm, eps, 2, 4, 7);
    ASSERT_FALSE(s.capped);
    EXPECT_GE(s.n, prev);
    EXPECT_LE(s.achieved, eps * s.initial);
    prev = s.n;
  }
}

TEST(InverseSearch, Capped) {
  const InverseSearch s = empirical_inverse_discrepancy(NormSpec::star_norm(), 0.01, 2, 1, 1, 16);
  EXPECT_TRUE(s.capped);
  EXPECT_EQ(s.n, 0);
}

TEST(InverseSearch, PsiAlphaBelowTheoremBound) {
  const InverseSearch s = empirical_inverse_discrepancy(NormSpec::psi(2), 0.5, 1, 4, 3);
  ASSERT_FALSE(s.capped);
  EXPECT_LE(static_cast<std::uint64_t>(s.n), theorem2_n_bound(2, psi_alpha_adjusted_eps(2, 0.5), 1).value);
}
