#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ckn/identities.hpp"
#include "ckn/models.hpp"
#include "ckn/random.hpp"
#include "ckn/special.hpp"
#include "ckn/test_functions.hpp"

using namespace ckn;

namespace {

CknParams make(std::vector<double> A, double a, double b) { return {MonomialWeight(std::move(A)), a, b}; }

std::vector<double> random_E_point(SplitMix64& rng, const MonomialWeight& w) {
  std::vector<double> x(w.dim());
  for (int i = 0; i < w.dim(); ++i) x[i] = w.charged(i) ? rng.uniform(0.1, 2.0) : rng.uniform(-2.0, 2.0);
  return x;
}

const std::vector<std::vector<double>> kSphereWeights = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 0}, {2, 0}};

}  // namespace

TEST(ModelE, EuclideanReduction) {
  const CknParams p = make({0, 0, 0}, 0, 0);
  const ModelE E(p, derive(p));
  const std::vector<double> x{0.3, -0.4, 1.2};
  const auto v = E.variables(x);
  const LocalOperators ops = E.at(x);
  EXPECT_NEAR(ops.gamma(v[0]), 1.0, 1e-15);
  const Jet c(3, 2.5);
  EXPECT_EQ(ops.gamma(c), 0.0);
  EXPECT_EQ(ops.generator(c), 0.0);
  EXPECT_THROW(E.at(std::vector<double>{0, 0, 0}), ChartError);
  const CknParams q = make({1, 0}, 0, 0.5);
  EXPECT_THROW(ModelE(q, derive(q)).at(std::vector<double>{-0.1, 1.0}), ChartError);
}

TEST(ModelE, DensityMatchesWeightAndVolume) {
  SplitMix64 rng(3);
  for (auto [A, a, b] : std::vector<std::tuple<std::vector<double>, double, double>>{
           {{1, 0}, 0, 0.5}, {{1, 1, 0}, -0.3, 0.2}, {{0, 0, 0}, -0.5, -0.1}}) {
    const CknParams p = make(A, a, b);
    const ModelE E(p, derive(p));
    for (int s = 0; s < 50; ++s) {
      const auto x = random_E_point(rng, p.weight);
      const double lhs = E.density(x), rhs = std::exp(-E.log_weight(x)) * E.metric_volume(x);
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * lhs);
    }
  }
}

TEST(ModelE, OptimizerSolvesEulerLagrange) {
  SplitMix64 rng(5);
  for (auto [A, a, b] : std::vector<std::tuple<std::vector<double>, double, double>>{
           {{0, 0, 0}, 0, 0}, {{1, 0}, 0, 0.5}, {{1, 0}, -0.5, -0.5}, {{1, 1, 0}, -0.3, 0.2}}) {
    const CknParams p = make(A, a, b);
    const DerivedParams dp = derive(p);
    const ModelE E(p, dp);
    for (int s = 0; s < 100; ++s) {
      const auto x = random_E_point(rng, p.weight);
      const auto v = E.variables(x);
      Jet r2(E.dim(), 0.0);
      for (const auto& xi : v) r2 += xi * xi;
      const Jet u = pow(0.5 * (1.0 + pow(r2, dp.alpha)), -(dp.n - 2) / 2);
      const double lhs = -E.at(x).generator(u);
      const double rhs = dp.fs_lhs * dp.n * (dp.n - 2) / 4 * std::pow(u.value(), dp.p - 1);
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(ModelS, RadialCoordinateRoundTrip) {
  SplitMix64 rng(8);
  for (double alpha : {0.25, 1.0, 2.0})
    for (int s = 0; s < 100; ++s) {
      const double r = std::exp(rng.uniform(-3, 3));
      // 1 -+ y lose relative accuracy like s or 1/s, s = r^{2 alpha}
      const double s2 = std::pow(r, 2 * alpha);
      EXPECT_NEAR(radius_from_y(y_from_radius(r, alpha), alpha), r, 1e-15 * r * (2 + s2 + 1 / s2) / alpha);
    }
}

TEST(ModelS, LinearProfile) {
  const CknParams p = make({1, 0}, 0, 0.5);
  const DerivedParams dp = derive(p);
  const ModelS S(p, dp);
  const double a2 = dp.fs_lhs, n = dp.n;
  SplitMix64 rng(9);
  for (int s = 0; s < 20; ++s) {
    const double y = rng.uniform(-0.95, 0.95);
    const SpherePoint pt = S.sphere().chart_point(random_sphere_point(rng, p.weight));
    const auto v = S.variables(y, pt);
    const LocalOperators ops = S.at(y, pt);
    EXPECT_NEAR(ops.gamma(v[0]), a2 * (1 - y * y), 1e-14);
    EXPECT_NEAR(ops.generator(v[0]), -a2 * n * y, 1e-13);
    EXPECT_NEAR(ops.gamma2(v[0]), a2 * a2 * (n - 1 + y * y), 1e-13);
    const double Lf = ops.generator(v[0]);
    EXPECT_NEAR(ops.gamma2(v[0]), a2 * (n - 1) * ops.gamma(v[0]) + Lf * Lf / n, 1e-13);
    EXPECT_LE(warped_identity(S, y, pt, v[0]).residual, 1e-12);
    const Jet c(S.dim(), 1.7);
    EXPECT_EQ(ops.gamma2(c), 0.0);
    EXPECT_EQ(warped_identity(S, y, pt, c).residual, 0.0);
  }
  EXPECT_THROW(S.at(1.0, S.sphere().chart_point(std::vector<double>{1, 0})), ChartError);
}

TEST(Sphere, ConformalChartAndDensity) {
  SplitMix64 rng(10);
  for (const auto& A : kSphereWeights) {
    const MonomialSphere sphere{MonomialWeight(A)};
    const int m = sphere.chart_dim();
    for (int s = 0; s < 50; ++s) {
      const auto th = random_sphere_point(rng, sphere.weight());
      const SpherePoint pt = sphere.chart_point(th);
      double r2 = 0;
      for (double z : pt.z) r2 += z * z;
      EXPECT_LE(r2, 1.0 + 1e-14);
      const auto emb = sphere.embedding(pt);
      for (int i = 0; i < sphere.ambient_dim(); ++i) EXPECT_NEAR(emb[i].value(), th[i], 1e-14);
      const double phi = 0.5 * (1 + r2);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double g = 0;
          for (const auto& e : emb) g += e.grad(a) * e.grad(b);
          EXPECT_NEAR(g, a == b ? 1.0 / (phi * phi) : 0.0, 1e-13);
        }
      // theta^A phi^{-(d-1)} = exp(-W) phi^{-(d-1)}
      double thA = 1;
      for (int i = 0; i < sphere.ambient_dim(); ++i) thA *= std::pow(th[i], A[i]);
      EXPECT_NEAR(std::exp(-sphere.weight_potential(pt).value()), thA, 1e-12 * thA);
      // far points switch charts
      SpherePoint far = pt;
      for (double& z : far.z) z *= 10.0 / std::sqrt(std::max(r2, 1e-3));
      if (m > 0 && r2 > 1e-6) {
        const SpherePoint back = sphere.normalized(far);
        EXPECT_NE(back.pole, far.pole);
        const auto t1 = sphere.ambient(far), t2 = sphere.ambient(back);
        for (int i = 0; i < sphere.ambient_dim(); ++i) EXPECT_NEAR(t1[i], t2[i], 1e-13);
      }
    }
  }
  EXPECT_THROW(MonomialSphere(MonomialWeight({0, 1})), DomainError);
}

TEST(Sphere, FreeCoordinateIsEigenfunction) {
  SplitMix64 rng(12);
  for (const auto& A : kSphereWeights) {
    const MonomialSphere sphere{MonomialWeight(A)};
    const double D = sphere.monomial_dimension();
    for (int s = 0; s < 200; ++s) {
      const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, sphere.weight()));
      const Jet td = sphere.embedding(pt).back();
      const LocalOperators ops = sphere.at(pt);
      EXPECT_LE(std::abs(-ops.generator(td) - (D - 1) * td.value()), 1e-10);
    }
  }
}

TEST(Sphere, LinearFunctionsSaturateRoundCd) {
  SplitMix64 rng(13);
  for (const auto& A : std::vector<std::vector<double>>{{0, 0, 0}, {0, 0}}) {
    const MonomialSphere sphere{MonomialWeight(A)};
    for (int s = 0; s < 50; ++s) {
      const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, sphere.weight()));
      const auto th = sphere.embedding(pt);
      Jet f(sphere.chart_dim(), 0.0);
      for (const auto& t : th) f += rng.uniform(-1, 1) * t;
      EXPECT_NEAR(cd_sphere_defect(sphere, sphere.at(pt), f), 0.0, 1e-12);
    }
  }
}

TEST(Sphere, CdDefectNonNegativeOnRandomCubics) {
  SplitMix64 rng(14);
  for (const auto& A : kSphereWeights) {
    const MonomialSphere sphere{MonomialWeight(A)};
    double worst = 1e300;
    for (int s = 0; s < 1000; ++s) {
      const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, sphere.weight()));
      const Jet f = random_cubic_jet(rng, sphere.chart_dim());
      worst = std::min(worst, cd_sphere_defect(sphere, sphere.at(pt), f));
    }
    EXPECT_GE(worst, -1e-9);
  }
}

TEST(Sphere, HessianOfWeight) {
  SplitMix64 rng(15);
  for (const auto& A : kSphereWeights) {
    const MonomialSphere sphere{MonomialWeight(A)};
    for (int s = 0; s < 500; ++s) {
      const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, sphere.weight()));
      const Jet f = random_cubic_jet(rng, sphere.chart_dim());
      const HessianBound h = hessian_W_bound_residual(sphere, pt, f);
      EXPECT_LE(h.identity_residual, 1e-10 * std::max(1.0, std::abs(h.hessian)));
      EXPECT_GE(h.bound_slack, -1e-10 * std::max(1.0, std::abs(h.hessian)));
      if (sphere.weight().charged_count() == 1) EXPECT_LE(std::abs(h.bound_slack), 1e-10 * std::max(1.0, std::abs(h.hessian)));
    }
    const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, sphere.weight()));
    const HessianBound c = hessian_W_bound_residual(sphere, pt, Jet(sphere.chart_dim(), 3.0));
    EXPECT_EQ(c.hessian, 0.0);
    EXPECT_EQ(c.bound_slack, 0.0);
  }
}

TEST(Warped, IdentityOnRandomCubics) {
  SplitMix64 rng(16);
  for (auto [A, a, b] : std::vector<std::tuple<std::vector<double>, double, double>>{
           {{1, 0}, 0, 0.5}, {{1, 1, 0}, -0.3, 0.2}, {{0, 0, 0}, 0, 0}, {{1, 0}, -0.5, -0.5}}) {
    const CknParams p = make(A, a, b);
    const ModelS S(p, derive(p));
    double worst = 0;
    for (int s = 0; s < 500; ++s) {
      const double y = rng.uniform(-0.95, 0.95);
      const SpherePoint pt = S.sphere().chart_point(random_sphere_point(rng, p.weight));
      worst = std::max(worst, warped_identity(S, y, pt, random_cubic_jet(rng, S.dim())).residual);
    }
    EXPECT_LE(worst, 1e-8);
  }
}

TEST(Diffusion, ProductAndChainRules) {
  SplitMix64 rng(17);
  const CknParams p = make({1, 0}, 0, 0.5);
  const DerivedParams dp = derive(p);
  const ModelE E(p, dp);
  const ModelS S(p, dp);
  const MonomialSphere& T = S.sphere();
  for (int s = 0; s < 100; ++s) {
    std::vector<LocalOperators> ops;
    ops.push_back(E.at(random_E_point(rng, p.weight)));
    const SpherePoint pt = T.chart_point(random_sphere_point(rng, p.weight));
    ops.push_back(S.at(rng.uniform(-0.9, 0.9), pt));
    ops.push_back(T.at(pt));
    for (const auto& o : ops) {
      const int dim = o.dim();
      const Jet f = random_cubic_jet(rng, dim), g = random_cubic_jet(rng, dim), h = random_cubic_jet(rng, dim);
      const double prod = o.gamma(f * g, h) - f.value() * o.gamma(g, h) - g.value() * o.gamma(f, h);
      EXPECT_LE(std::abs(prod), 1e-12 * std::max(1.0, std::abs(o.gamma(f * g, h))));
      // psi(u) = u^3 - 2u
      const Jet psi = f * f * f - 2.0 * f;
      const double u = f.value();
      const double chain = o.generator(psi) - (3 * u * u - 2) * o.generator(f) - 6 * u * o.gamma(f);
      EXPECT_LE(std::abs(chain), 1e-10 * std::max(1.0, std::abs(o.generator(psi))));
    }
  }
}

TEST(Ibp, Sphere) {
  SplitMix64 rng(18);
  QuadratureOptions o;
  o.initial_nodes = 32;
  o.max_nodes = 256;
  for (const auto& A : kSphereWeights) {
    const MonomialSphere sphere{MonomialWeight(A)};
    const int d = sphere.ambient_dim();
    const AmbientFunction td = [](std::span<const Jet> t) { return t.back(); };
    const AmbientFunction one = [](std::span<const Jet> t) { return Jet(t[0].dim(), 1.0); };
    EXPECT_LE(ibp_residual_sphere(sphere, td, td, o), 1e-8);
    for (int s = 0; s < 3; ++s) {
      const TrigPolynomial h = TrigPolynomial::random(rng, d, 4, 2, {}, 2.0);
      const TrigPolynomial f = TrigPolynomial::random(rng, d, 4, 2, {}, 2.0);
      EXPECT_LE(ibp_residual_sphere(sphere, one, h, o), 1e-8);
      EXPECT_LE(ibp_residual_sphere(sphere, f, h, o), 1e-8);
    }
  }
}

TEST(Ibp, SphereDetectsPerturbedWeight) {
  const MonomialSphere sphere(MonomialWeight({1, 0, 0}), 0.1);
  const AmbientFunction td = [](std::span<const Jet> t) { return t.back(); };
  QuadratureOptions o;
  o.rel_tol = 1e-6;
  EXPECT_GT(ibp_residual_sphere(sphere, td, td, o), 1e-4);
}

TEST(Ibp, Warped) {
  SplitMix64 rng(19);
  QuadratureOptions o;
  o.initial_nodes = 24;
  o.max_nodes = 192;
  for (auto [A, a, b] : std::vector<std::tuple<std::vector<double>, double, double>>{
           {{1, 0}, 0, 0.5}, {{1, 0, 0}, -0.2, 0.3}}) {
    const CknParams p = make(A, a, b);
    const ModelS S(p, derive(p));
    const CutoffFamily zeta(8);
    const auto breaks = zeta.breakpoints();
    const double margin = 1.0 / zeta.k();
    const AmbientFunction fy = [](std::span<const Jet> v) { return v[0]; };
    const AmbientFunction hz = [&](std::span<const Jet> v) { return zeta(v[0]); };
    EXPECT_LE(ibp_residual_S(S, fy, hz, margin, o, breaks), 1e-8);
    const AmbientFunction zero = [](std::span<const Jet> v) { return Jet(v[0].dim(), 0.0); };
    EXPECT_EQ(ibp_residual_S(S, fy, zero, margin, o, breaks), 0.0);
    for (int s = 0; s < 2; ++s) {
      const TrigPolynomial phi = TrigPolynomial::random(rng, S.dim(), 3, 2, {}, 1.0);
      const TrigPolynomial ft = TrigPolynomial::random(rng, S.dim() + 1, 3, 2, {}, 1.0);
      const AmbientFunction h = [&](std::span<const Jet> v) { return zeta(v[0]) * (v[0] * v[0] + 0.5) * phi(v.subspan(1)); };
      const AmbientFunction f = [&](std::span<const Jet> v) { return ft(v); };
      EXPECT_LE(ibp_residual_S(S, f, h, margin, o, breaks), 1e-8);
    }
    const AmbientFunction bad = [](std::span<const Jet> v) { return v[0]; };
    EXPECT_THROW(ibp_residual_S(S, fy, bad, margin, o, breaks), DomainError);
  }
}

TEST(Cutoff, Bounds) {
  for (int k : {3, 8, 20}) {
    const CutoffFamily z(k);
    EXPECT_EQ(z.value(0.0), 1.0);
    EXPECT_EQ(z.value(1.0 - 0.5 / k), 0.0);
    EXPECT_EQ(z.value(-1.0 + 0.5 / k), 0.0);
    double d1 = 0, d2 = 0;
    for (double y = 0.0; y < 1.0; y += 1e-5) {
      const Jet j = z(Jet::variable(1, 0, y));
      d1 = std::max(d1, std::abs(j.grad(0)));
      d2 = std::max(d2, std::abs(j.hess(0, 0)));
    }
    EXPECT_LE(d1, 2.0 * k + 1e-9);
    // a 0 -> 1 ramp of length 1/k forces sup|zeta''| >= 4 k^2; this step gives ~9.84 k^2
    EXPECT_GE(d2, 4.0 * k * k);
    EXPECT_LE(d2, 10.0 * k * k);
  }
}

TEST(IntegratedCd, SymmetricRegime) {
  SplitMix64 rng(20);
  QuadratureOptions o;
  o.initial_nodes = 32;
  o.max_nodes = 256;
  const CknParams p = make({1, 0}, 0, 0.5);
  const DerivedParams dp = derive(p);
  const ModelS S(p, dp);
  const AmbientFunction c = [](std::span<const Jet> v) { return Jet(v[0].dim(), 3.0); };
  auto r = integrated_cd_defect(S, c, dp.n + 1, 0.0, o);
  EXPECT_NEAR(r.weighted, 0.0, 1e-12);
  EXPECT_NEAR(r.unweighted, 0.0, 1e-12);
  const AmbientFunction f = [](std::span<const Jet> v) { return 2.0 + v.back(); };
  r = integrated_cd_defect(S, f, dp.n + 1, 0.0, o);
  EXPECT_GE(r.weighted, -1e-9);
  EXPECT_GE(r.unweighted, -1e-9);
  for (int s = 0; s < 20; ++s) {
    const std::vector<bool> even{false, true, false};
    const TrigPolynomial t = TrigPolynomial::random(rng, 3, 4, 2, even, 0.9).shifted(1.0);
    const AmbientFunction g = [&](std::span<const Jet> v) { return t(v); };
    const double y = rng.uniform(-0.8, 0.8);
    r = integrated_cd_defect(S, g, dp.n + rng.uniform(0.1, 3), y, o);
    EXPECT_GE(r.weighted, -1e-9);
    EXPECT_GE(r.unweighted, -1e-9);
  }
  const AmbientFunction neg = [](std::span<const Jet> v) { return v.back(); };
  EXPECT_THROW(integrated_cd_defect(S, neg, dp.n + 1, 0.0, o), DomainError);
}
