#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "epitaxy/model.hpp"

using namespace epitaxy;

TEST(Boundary, ParsesCaseInsensitive) {
  EXPECT_EQ(parse_boundary("dirichlet"), BoundaryKind::Dirichlet);
  EXPECT_EQ(parse_boundary("Navier"), BoundaryKind::Navier);
  EXPECT_EQ(parse_boundary("NAVIER"), BoundaryKind::Navier);
  EXPECT_THROW(parse_boundary("neumann"), ConfigError);
  EXPECT_THROW(parse_boundary(""), ConfigError);
  EXPECT_EQ(parse_boundary(to_string(BoundaryKind::Navier)), BoundaryKind::Navier);
}

TEST(Boundary, NavierShootingRoundTrips) {
  for (auto mode : {NavierShooting::SlopeEqualsValue, NavierShooting::ZeroSlope})
    EXPECT_EQ(parse_navier_shooting(to_string(mode)), mode);
  EXPECT_THROW(parse_navier_shooting("sideways"), ConfigError);
}

TEST(Rhs, Examples) {
  const Forcing one;
  EXPECT_DOUBLE_EQ(rhs_w(1.0, 0.0, 0.0, 2.0, one), 1.0);
  EXPECT_DOUBLE_EQ(rhs_w(1.0, 2.0, 1.0, 0.0, one), 3.0);
  EXPECT_DOUBLE_EQ(rhs_w(0.5, 0.0, 0.0, 16.0, one), 2.0);
}

TEST(Rhs, RejectsNonPositiveRadius) {
  const Forcing one;
  EXPECT_THROW(rhs_w(0.0, 1.0, 1.0, 1.0, one), DomainError);
  EXPECT_THROW(rhs_w(-0.25, 1.0, 1.0, 1.0, one), DomainError);
}

TEST(Rhs, LinearComparisonDropsQuadraticTerm) {
  const Forcing one;
  EXPECT_DOUBLE_EQ(rhs_w_linear(1.0, 2.0, 1.0, 0.0, one), 1.0);
  EXPECT_DOUBLE_EQ(rhs_w_linear(0.5, 0.0, 0.0, 16.0, one), 2.0);
}

TEST(Rhs, RandomSamplesMatchClosedFormAndAreAffineInLambda) {
  const Forcing one;
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> radius(1e-6, 1.0);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  std::uniform_real_distribution<double> load(0.0, 200.0);
  for (int k = 0; k < 1000; ++k) {
    const double r = radius(rng), w = value(rng), wp = value(rng);
    const double l1 = load(rng), l2 = load(rng);
    const double expected = wp / r + w * w / (2 * r * r) + l1 * r * r / 2;
    const double scale = std::abs(wp / r) + w * w / (2 * r * r) + l1 * r * r / 2;
    EXPECT_NEAR(rhs_w(r, w, wp, l1, one), expected, 1e-14 * scale);

    const double combined = rhs_w(r, w, wp, l1 + l2, one) - rhs_w(r, w, wp, l1, one);
    const double single = rhs_w(r, w, wp, l2, one) - rhs_w(r, w, wp, 0.0, one);
    EXPECT_NEAR(combined, single, 1e-12 * (scale + (l1 + l2) * r * r));
  }
}

TEST(FinalConditions, Examples) {
  const auto d = final_conditions(BoundaryKind::Dirichlet, 3.0);
  EXPECT_EQ(d.w, 0.0);
  EXPECT_EQ(d.wp, 3.0);
  const auto n = final_conditions(BoundaryKind::Navier, 3.0);
  EXPECT_EQ(n.w, 3.0);
  EXPECT_EQ(n.wp, 3.0);
  const auto z = final_conditions(BoundaryKind::Navier, 3.0, NavierShooting::ZeroSlope);
  EXPECT_EQ(z.w, 3.0);
  EXPECT_EQ(z.wp, 0.0);
  const auto zero = final_conditions(BoundaryKind::Dirichlet, 0.0);
  EXPECT_EQ(zero.w, 0.0);
  EXPECT_EQ(zero.wp, 0.0);
}

TEST(Forcing, CumulativeExamples) {
  const Forcing one;
  EXPECT_DOUBLE_EQ(cumulative_forcing(one, 1.0), 0.5);
  EXPECT_EQ(cumulative_forcing(one, 0.0), 0.0);
  EXPECT_NEAR(cumulative_forcing(Forcing::power(1.0), 1.0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(cumulative_forcing(Forcing::power(2.0), 0.5), std::pow(0.5, 4) / 4, 1e-12);
  EXPECT_THROW(cumulative_forcing(one, 1.5), DomainError);
  EXPECT_THROW(cumulative_forcing(one, -0.1), DomainError);
}

TEST(Forcing, CumulativeIsMonotone) {
  const std::vector<Forcing> profiles{
      Forcing(), Forcing::power(0.5), Forcing::power(3.0),
      Forcing([](double r) { return 1.0 + std::sin(10.0 * r); }, "wavy")};
  for (const auto& f : profiles) {
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double F = cumulative_forcing(f, k / 1000.0);
      EXPECT_GE(F, prev) << f.name() << " at " << k;
      prev = F;
    }
  }
}

TEST(Forcing, RejectsNegativeOrNonFiniteProfile) {
  EXPECT_THROW(Forcing([](double r) { return r - 0.5; }, "neg"), ConfigError);
  EXPECT_THROW(Forcing([](double) { return std::numeric_limits<double>::quiet_NaN(); }, "nan"),
               ConfigError);
  EXPECT_THROW(Forcing::power(-1.0), ConfigError);
}

TEST(ProblemSpec, DefaultsAreValid) {
  const auto d = ProblemSpec::make(BoundaryKind::Dirichlet, 100.0);
  EXPECT_NO_THROW(d.validate());
  EXPECT_EQ(d.scan_half_width, kDefaultScanDirichlet);
  EXPECT_EQ(d.scan_points, 2000);
  EXPECT_EQ(d.step, 1e-4);
  EXPECT_EQ(d.epsilon, 1e-6);
  const auto n = ProblemSpec::make(BoundaryKind::Navier, 5.0);
  EXPECT_EQ(n.scan_half_width, kDefaultScanNavier);
}

TEST(ProblemSpec, RejectsViolatedInvariants) {
  const auto base = ProblemSpec::make(BoundaryKind::Dirichlet, 1.0);
  auto bad = base;
  bad.lambda = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.epsilon = 1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.epsilon = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.step = 1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.step = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.scan_points = 1;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = base;
  bad.scan_half_width = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(ProblemSpec, HashIsStableAndSensitive) {
  const auto a = ProblemSpec::make(BoundaryKind::Dirichlet, 100.0);
  const auto b = ProblemSpec::make(BoundaryKind::Dirichlet, 100.0);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), a.with_lambda(100.5).hash());
  EXPECT_NE(a.hash(), ProblemSpec::make(BoundaryKind::Navier, 100.0).hash());
  auto c = a;
  c.step = 2e-4;
  EXPECT_NE(a.hash(), c.hash());
}
