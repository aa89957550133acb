#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ckn/special.hpp"

using namespace ckn;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Oracle: composite Simpson on [-L, L] of cosh(alpha u)^{-n}.
double simpson_cosh(double alpha, double n) {
  const double L = 60.0 / (alpha * n);
  const int N = 200000;
  const double h = 2 * L / N;
  double s = 0;
  for (int i = 0; i <= N; ++i) {
    const double u = -L + i * h;
    const double f = std::pow(std::cosh(alpha * u), -n);
    s += (i == 0 || i == N) ? f : (i % 2 ? 4 * f : 2 * f);
  }
  return s * h / 3;
}

}  // namespace

TEST(LogGamma, Examples) {
  EXPECT_NEAR(log_gamma(0.5), std::log(std::sqrt(kPi)), 1e-14);
  EXPECT_NEAR(log_gamma(2.5), std::log(3 * std::sqrt(kPi) / 4), 1e-14);
  EXPECT_NEAR(log_gamma(6), std::log(120.0), 1e-13);
  EXPECT_THROW(log_gamma(0), DomainError);
  EXPECT_THROW(log_gamma(-1), DomainError);
}

TEST(LogGamma, RelativeErrorAgainstTgamma) {
  double worst = 0;
  for (double x = 0.5; x <= 50.0; x += 0.0137) {
    worst = std::max(worst, rel(std::exp(log_gamma(x)), std::tgamma(x)));
  }
  EXPECT_LE(worst, 1e-13);
}

TEST(SphereArea, Examples) {
  EXPECT_NEAR(sphere_weight_area(MonomialWeight({0, 0, 0})), 4 * kPi, 1e-13);
  EXPECT_NEAR(sphere_weight_area(MonomialWeight({1, 0})), 2.0, 1e-13);
  EXPECT_NEAR(sphere_weight_area(MonomialWeight({0, 0})), 2 * kPi, 1e-13);
}

TEST(SphereArea, UnweightedMatchesStandardArea) {
  for (int d = 2; d <= 5; ++d) {
    const double area = 2 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
    EXPECT_LE(rel(sphere_weight_area(MonomialWeight(std::vector<double>(d, 0.0))), area), 1e-13);
  }
}

TEST(SphereArea, PermutationInvariant) {
  const double a = sphere_weight_area(MonomialWeight({1.5, 0.3, 0}));
  EXPECT_LE(rel(sphere_weight_area(MonomialWeight({0, 1.5, 0.3})), a), 1e-14);
  EXPECT_LE(rel(sphere_weight_area(MonomialWeight({0.3, 0, 1.5})), a), 1e-14);
}

TEST(CoshProfile, Examples) {
  EXPECT_NEAR(cosh_profile_integral(1, 2), 2.0, 1e-13);
  EXPECT_NEAR(cosh_profile_integral(2, 2), 1.0, 1e-13);
  EXPECT_NEAR(cosh_profile_integral(1, 4), 4.0 / 3.0, 1e-13);
  EXPECT_THROW(cosh_profile_integral(0, 2), DomainError);
  EXPECT_THROW(cosh_profile_integral(1, 0), DomainError);
}

TEST(CoshProfile, MatchesQuadrature) {
  for (double alpha : {0.25, 1.0, 2.0})
    for (double n : {3.0, 6.0, 7.5}) EXPECT_LE(rel(cosh_profile_integral(alpha, n), simpson_cosh(alpha, n)), 1e-10);
}

TEST(ZConstant, Classical) {
  CknParams p{MonomialWeight({0, 0, 0}), 0, 0};
  const DerivedParams dp = derive(p);
  EXPECT_LE(rel(z_constant(p, dp), 2 * kPi * kPi), 1e-13);
  const double C = 4.0 / (3.0 * std::pow(2 * kPi * kPi, 2.0 / 3.0));
  EXPECT_LE(rel(optimal_constant(p, dp), C), 1e-13);
  EXPECT_NEAR(optimal_constant(p, dp), 0.1825516, 1e-7);
}

TEST(ZConstant, SymmetricCase) {
  CknParams p{MonomialWeight({1, 0}), 0, 0.5};
  const DerivedParams dp = derive(p);
  // Oracle: sphere factor 2 times an independent Simpson profile integral.
  const double z_oracle = 2.0 * simpson_cosh(dp.alpha, dp.n);
  EXPECT_LE(rel(z_oracle, 128.0 / 15.0), 1e-10);
  EXPECT_LE(rel(z_constant(p, dp), 128.0 / 15.0), 1e-13);
  EXPECT_LE(rel(optimal_constant(p, dp), 4.0 / (1.5 * std::cbrt(128.0 / 15.0))), 1e-13);
}

TEST(ZConstant, FactorizationAndScaling) {
  CknParams p{MonomialWeight({1, 0.5, 0}), -0.3, 0.1};
  const DerivedParams dp = derive(p);
  const auto c = closed_form_constants(p, dp);
  EXPECT_LE(rel(c.Z, c.sphere_area * c.profile_integral), 1e-13);
  EXPECT_GT(c.C_opt, 0);
  EXPECT_LE(rel(cosh_profile_integral(2 * dp.alpha, dp.n), 0.5 * cosh_profile_integral(dp.alpha, dp.n)), 1e-14);
}

TEST(OptimalConstant, BreakingFlag) {
  CknParams p{MonomialWeight({1, 0}), -0.5, -0.5};
  const auto c = closed_form_constants(p, derive(p));
  EXPECT_FALSE(c.optimality_proven);
  EXPECT_TRUE(std::isfinite(c.C_opt));
}
