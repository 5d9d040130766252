#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "checks.hpp"
#include "epitaxy/energy.hpp"
#include "epitaxy/shoot.hpp"

using namespace epitaxy;

namespace {

// w = r^4 - r^2 sampled exactly on the default backward grid.
WProfile quartic_w() {
  WProfile p;
  auto grid = backward_grid(1e-6, 1e-4);
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    const double r = *it;
    p.radii.push_back(r);
    p.w.push_back(r * r * r * r - r * r);
    p.wp.push_back(4 * r * r * r - 2 * r);
  }
  return p;
}

}  // namespace

TEST(Reconstruct, ZeroProfileGivesZeroHeight) {
  auto p = quartic_w();
  std::fill(p.w.begin(), p.w.end(), 0.0);
  std::fill(p.wp.begin(), p.wp.end(), 0.0);
  const auto h = reconstruct_height(p);
  for (double u : h.u) ASSERT_EQ(u, 0.0);
}

TEST(Reconstruct, QuarticProfile) {
  const auto h = reconstruct_height(quartic_w());
  EXPECT_EQ(h.u.back(), 0.0);
  // u' = r^3 - r, u = (1 - r^2)^2 / 4.
  EXPECT_NEAR(h.u.front(), 0.25, 1e-8);
  for (std::size_t i = 0; i < h.size(); i += 997) {
    const double r = h.radii[i];
    EXPECT_NEAR(h.u[i], std::pow(1 - r * r, 2) / 4, 1e-8);
    EXPECT_NEAR(h.up[i], r * r * r - r, 1e-14);
    if (r > 1e-3) EXPECT_NEAR(h.upp[i], 3 * r * r - 1, 1e-12);
  }
  EXPECT_NO_THROW(h.validate());
}

TEST(Functional, ZeroHeightHasZeroEnergy) {
  auto h = reconstruct_height(quartic_w());
  std::fill(h.u.begin(), h.u.end(), 0.0);
  std::fill(h.up.begin(), h.up.end(), 0.0);
  std::fill(h.upp.begin(), h.upp.end(), 0.0);
  for (auto kind : {FunctionalKind::J, FunctionalKind::I})
    EXPECT_EQ(evaluate_functional(kind, h, 7.0, Forcing()).total, 0.0);
}

TEST(Functional, SquaredBumpClosedForm) {
  const double c[] = {0.0, 1.0};  // (1 - r^2)^2
  const auto h = checks::polynomial_profile(c, 256);
  const auto e = evaluate_functional(FunctionalKind::J, h, 0.0, Forcing());
  EXPECT_NEAR(e.total, 76.0 / 15.0, 1e-6);
  EXPECT_NEAR(e.quadratic, 16.0 / 3.0, 1e-6);
  EXPECT_NEAR(e.cubic, -4.0 / 15.0, 1e-6);
  // u'(1) = 0, so I = J.
  EXPECT_NEAR(evaluate_functional(FunctionalKind::I, h, 0.0, Forcing()).total, 76.0 / 15.0, 1e-6);
}

TEST(Functional, ParabolaClosedForm) {
  const double c[] = {1.0};  // 1 - r^2
  const auto h = checks::polynomial_profile(c, 256);
  EXPECT_NEAR(evaluate_functional(FunctionalKind::I, h, 0.0, Forcing()).total, 11.0 / 3.0, 1e-9);
  EXPECT_NEAR(evaluate_functional(FunctionalKind::J, h, 0.0, Forcing()).total, 5.0 / 3.0, 1e-9);
  // int (1 - r^2) r dr = 1/4.
  EXPECT_NEAR(evaluate_functional(FunctionalKind::J, h, 4.0, Forcing()).forcing_term, 1.0, 1e-9);
}

TEST(Functional, AffineInLambda) {
  const double c[] = {0.3, -1.2, 0.7};
  const auto h = checks::polynomial_profile(c, 512);
  for (auto kind : {FunctionalKind::J, FunctionalKind::I}) {
    const auto e0 = evaluate_functional(kind, h, 0.0, Forcing());
    const auto e1 = evaluate_functional(kind, h, 1.0, Forcing());
    const auto e7 = evaluate_functional(kind, h, 7.0, Forcing());
    EXPECT_NEAR(e7.forcing_term, 7.0 * e1.forcing_term, 1e-12);
    EXPECT_NEAR(e7.total - e0.total, -7.0 * e1.forcing_term, 1e-12);
  }
}

TEST(Functional, IDominatesJOnRandomProfiles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> load(0.0, 200.0);
  for (int k = 0; k < 100; ++k) {
    const auto h = checks::random_profile(rng);
    const double lambda = load(rng);
    const double I = evaluate_functional(FunctionalKind::I, h, lambda, Forcing()).total;
    const double J = evaluate_functional(FunctionalKind::J, h, lambda, Forcing()).total;
    EXPECT_GE(I, J - 1e-10);
    // The difference is the boundary term u'(1)^2 / 2, up to Simpson error.
    EXPECT_NEAR(I - J, 0.5 * h.up.back() * h.up.back(), 1e-7 * (1 + std::abs(I)));
  }
}

TEST(Functional, CoarseWigglyGridIsRejected) {
  HeightProfile h;
  for (int i = 0; i <= 4; ++i) {
    const double r = i / 4.0;
    h.radii.push_back(r);
    h.u.push_back(i == 4 ? 0.0 : std::cos(20 * r));
    h.up.push_back(-20 * std::sin(20 * r));
    h.upp.push_back(-400 * std::cos(20 * r));
  }
  EXPECT_THROW(evaluate_functional(FunctionalKind::J, h, 1.0, Forcing()), GridTooCoarse);
}

TEST(HeightProfile, ValidateRejectsBadData) {
  const double c[] = {1.0};
  const auto good = checks::polynomial_profile(c, 16);
  EXPECT_NO_THROW(good.validate());
  auto bad = good;
  bad.u.back() = 0.1;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = good;
  bad.radii[3] = bad.radii[2];
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = good;
  bad.up.pop_back();
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = good;
  bad.upp[5] = std::nan("");
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Simpson, ExactOnQuadraticsIncludingOddTail) {
  for (int n : {8, 9}) {
    std::vector<double> x, y;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      x.push_back(t * t);  // nonuniform
      y.push_back(x.back() * x.back() - x.back());
    }
    EXPECT_NEAR(simpson(x, y), 1.0 / 3.0 - 0.5, 1e-14) << n;
  }
  std::vector<double> x{0.0, 0.5, 1.0}, y{1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(simpson(x, y), 1.0);
}

// Scaling u -> t u gives d/dt E(t u) = 2Q + 3C - F, which vanishes at critical
// points of E.
TEST(Functional, ScalingIdentityOnSolvedBranches) {
  auto check = [](const ProblemSpec& spec, FunctionalKind kind) {
    const auto out = solve_branches(spec);
    ASSERT_TRUE(out.pair.has_value());
    for (const Branch* b : {&out.pair->minimum, &out.pair->mountain_pass}) {
      const auto e = evaluate_functional(kind, b->height, spec.lambda, spec.forcing);
      const double scale = std::abs(e.quadratic) + std::abs(e.cubic) + std::abs(e.forcing_term);
      EXPECT_LT(std::abs(2 * e.quadratic + 3 * e.cubic - e.forcing_term), 1e-4 * scale);
      EXPECT_TRUE(origin_slope_consistent(b->height));
    }
  };
  check(ProblemSpec::make(BoundaryKind::Dirichlet, 100.0), FunctionalKind::J);
  // Default Navier shots have u''(1) = 0: critical points of J.
  check(ProblemSpec::make(BoundaryKind::Navier, 5.0), FunctionalKind::J);
  // Zero-slope shots have u''(1) + u'(1) = 0: critical points of I.
  auto zero_slope = ProblemSpec::make(BoundaryKind::Navier, 5.0);
  zero_slope.navier_shooting = NavierShooting::ZeroSlope;
  check(zero_slope, FunctionalKind::I);
}
