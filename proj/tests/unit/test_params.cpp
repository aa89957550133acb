#include <gtest/gtest.h>

#include <cmath>

#include "ckn/params.hpp"
#include "ckn/random.hpp"

using namespace ckn;

namespace {

CknParams make(std::vector<double> A, double a, double b) { return {MonomialWeight(std::move(A)), a, b}; }

}  // namespace

TEST(Derive, ClassicalSobolev) {
  const DerivedParams dp = derive(make({0, 0, 0}, 0, 0));
  EXPECT_DOUBLE_EQ(dp.D, 3);
  EXPECT_DOUBLE_EQ(dp.p, 6);
  EXPECT_DOUBLE_EQ(dp.n, 3);
  EXPECT_DOUBLE_EQ(dp.alpha, 1);
  EXPECT_EQ(dp.regime, Regime::Threshold);
}

TEST(Derive, SymmetricCase) {
  const DerivedParams dp = derive(make({1, 0}, 0, 0.5));
  EXPECT_NEAR(dp.D, 3, 1e-15);
  EXPECT_NEAR(dp.p, 3, 1e-15);
  EXPECT_NEAR(dp.n, 6, 1e-15);
  EXPECT_NEAR(dp.alpha, 0.25, 1e-15);
  EXPECT_NEAR(dp.fs_lhs, 0.0625, 1e-15);
  EXPECT_NEAR(dp.fs_rhs, 0.4, 1e-15);
  EXPECT_EQ(dp.regime, Regime::Symmetric);
}

TEST(Derive, BreakingCase) {
  const CknParams p = make({1, 0}, -0.5, -0.5);
  const DerivedParams dp = derive(p);
  EXPECT_NEAR(dp.p, 6, 1e-15);
  EXPECT_NEAR(dp.n, 3, 1e-15);
  EXPECT_NEAR(dp.alpha, 2, 1e-15);
  EXPECT_EQ(dp.regime, Regime::Breaking);
  EXPECT_NEAR(dp.alpha * dp.n, 6.0, 1e-14);
  EXPECT_NEAR(dp.D - p.b * dp.p, 6.0, 1e-14);
}

TEST(Derive, DomainErrors) {
  EXPECT_THROW(derive(make({1, 0}, 0, 1)), DomainError);
  EXPECT_THROW(derive(make({1, 0}, 0.5, 0.4)), DomainError);
  EXPECT_THROW(derive(make({1, 0}, 0.6, 0.8)), DomainError);
  EXPECT_THROW(MonomialWeight({-1.0, 0.0}), DomainError);
  EXPECT_THROW(MonomialWeight({0.0}), DomainError);
  try {
    derive(make({1, 0}, 0, 1));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("Hardy"), std::string::npos);
  }
}

TEST(Derive, ZeroWeightAccepted) {
  EXPECT_NO_THROW(derive(make({0, 0}, -0.5, -0.2)));
}

TEST(Derive, IdentitiesAndOrderingOnRandomDraws) {
  SplitMix64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const int d = rng.uniform_int(2, 4);
    std::vector<double> A(d);
    for (auto& x : A) x = rng.uniform() < 0.4 ? 0.0 : rng.uniform(0, 3);
    const double D = d;
    double absA = 0;
    for (double x : A) absA += x;
    const double ac = (D + absA - 2) / 2;
    const double a = rng.uniform(ac - 3, ac - 1e-3);
    const double b = a + rng.uniform(0, 0.95);
    CknParams p{MonomialWeight(A), a, b};
    DerivedParams dp;
    try {
      dp = derive(p);
    } catch (const DomainError&) {
      continue;
    }
    const IdentityResiduals r = identity_residuals(p, dp);
    EXPECT_LE(r.alpha_n, 1e-12);
    EXPECT_LE(r.two_a, 1e-12);
    EXPECT_LE(d, dp.D + 1e-12);
    EXPECT_LE(dp.D, dp.n + 1e-12);
    EXPECT_NEAR(dp.n, 2 * dp.p / (dp.p - 2), 1e-12 * dp.n);
  }
}

TEST(FelliSchneider, ToleranceInvariance) {
  DerivedParams dp;
  dp.fs_lhs = 0.5;
  dp.fs_rhs = 0.5 + 2e-6;
  EXPECT_EQ(felli_schneider(dp, 1e-12), Regime::Symmetric);
  EXPECT_EQ(felli_schneider(dp, 1e-7), Regime::Symmetric);
  dp.fs_rhs = 0.5 - 2e-6;
  EXPECT_EQ(felli_schneider(dp, 1e-12), Regime::Breaking);
  EXPECT_EQ(felli_schneider(dp, 1e-7), Regime::Breaking);
}

TEST(Hypotheses, Examples) {
  {
    const CknParams p = make({1, 0}, 0, 0.5);
    const HypothesisReport h = theorem_hypotheses(p, derive(p));
    EXPECT_TRUE(h.all());
    EXPECT_TRUE(h.warnings().empty());
  }
  {
    const CknParams p = make({0, 0, 0}, 0, 0);
    const HypothesisReport h = theorem_hypotheses(p, derive(p));
    EXPECT_FALSE(h.n_above_four);
    EXPECT_FALSE(h.strict_classification);
    EXPECT_TRUE(h.felli_schneider);
  }
  {
    const CknParams p = make({1, 0}, -0.5, -0.5);
    const HypothesisReport h = theorem_hypotheses(p, derive(p));
    EXPECT_FALSE(h.felli_schneider);
    EXPECT_FALSE(h.n_above_four);
    EXPECT_FALSE(h.warnings().empty());
  }
}

TEST(Interpolation, Endpoints) {
  auto e = interpolation_exponents(3, 6);
  EXPECT_NEAR(e.theta, 0, 1e-15);
  EXPECT_NEAR(e.r, 0, 1e-15);
  e = interpolation_exponents(3, 2);
  EXPECT_NEAR(e.theta, 1, 1e-15);
  EXPECT_NEAR(e.r, 2, 1e-15);
  EXPECT_THROW(interpolation_exponents(3, 7), DomainError);
  EXPECT_THROW(interpolation_exponents(3, 1.5), DomainError);
}

TEST(Interpolation, InteriorSolvesDefiningRelations) {
  // Oracle: solve 1/p = theta/2 + (1-theta)(D-2)/(2D) for theta directly.
  const double D = 3, p = 3;
  const double theta = (1 / p - (D - 2) / (2 * D)) / (0.5 - (D - 2) / (2 * D));
  const auto e = interpolation_exponents(D, p);
  EXPECT_NEAR(e.theta, theta, 1e-14);
  EXPECT_NEAR(e.theta, 0.5, 1e-14);
  EXPECT_NEAR(e.r, 1.5, 1e-14);
  EXPECT_NEAR(2 * e.r / (e.theta * p), 2.0, 1e-12);
  EXPECT_LE(e.identity_residual, 1e-12);
}

TEST(Subcritical, ClassicalPlugIn) {
  // d = 5 has p = 10/3 < 4, so q = 4 lies outside (2, p) there.
  EXPECT_THROW(subcritical_constant(4, derive(make({0, 0, 0, 0, 0}, 0, 0))), DomainError);
  // d = 3: nu = 4, n = 3, alpha = 1 -> 4*3/(4*2*1*2).
  const auto c = subcritical_constant(4, derive(make({0, 0, 0}, 0, 0)));
  EXPECT_NEAR(c.nu, 4, 1e-15);
  EXPECT_NEAR(c.A_q, 3.0 / 4.0, 1e-15);
}

TEST(Subcritical, LimitAndMonotonicity) {
  const CknParams p = make({1, 0}, 0, 0.5);
  const DerivedParams dp = derive(p);
  const auto c = subcritical_constant(dp.p * (1 - 1e-6), dp);
  EXPECT_NEAR(c.A_q, tight_sobolev_constant(dp), 1e-5 * tight_sobolev_constant(dp));
  for (double q = 2.01; q < dp.p; q += 0.01) EXPECT_GT(subcritical_constant(q, dp).nu, dp.n);
  EXPECT_THROW(subcritical_constant(2, dp), DomainError);
  EXPECT_THROW(subcritical_constant(dp.p, dp), DomainError);
}
