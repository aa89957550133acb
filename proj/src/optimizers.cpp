#include "ckn/optimizers.hpp"

#include <algorithm>
#include <cmath>

#include "ckn/errors.hpp"
#include "ckn/special.hpp"

namespace ckn {

namespace {

// Fixed chart point for radial evaluations; any interior point works.
SpherePoint interior_point(const MonomialSphere& sphere) {
  std::vector<double> th(sphere.ambient_dim(), 1.0 / std::sqrt(static_cast<double>(sphere.ambient_dim())));
  return sphere.chart_point(th);
}

double profile_mass(const DerivedParams& dp) { return cosh_profile_integral(dp.alpha, dp.n); }

}  // namespace

OptimizerE::OptimizerE(double s, double t, const DerivedParams& dp) : s_(s), t_(t), dp_(dp) {
  if (!(s > 0.0 && t > 0.0)) throw DomainError("OptimizerE needs s > 0 and t > 0");
}

double OptimizerE::value(double r) const {
  return std::pow(s_ + t_ * std::pow(r, 2.0 * dp_.alpha), -(dp_.n - 2.0) / 2.0);
}

double OptimizerE::derivative(double r) const {
  const double a = dp_.alpha, k = (dp_.n - 2.0) / 2.0;
  const double q = s_ + t_ * std::pow(r, 2.0 * a);
  return -k * std::pow(q, -k - 1.0) * 2.0 * a * t_ * std::pow(r, 2.0 * a - 1.0);
}

Jet OptimizerE::operator()(std::span<const Jet> x) const {
  Jet r2(x[0].dim(), 0.0);
  for (const Jet& xi : x) r2 += xi * xi;
  return pow(s_ + t_ * pow(r2, dp_.alpha), -(dp_.n - 2.0) / 2.0);
}

OptimizerS::OptimizerS(double C, double B, const DerivedParams& dp) : C_(C), B_(B), dp_(dp) {
  if (!(C > std::abs(B))) throw DomainError("OptimizerS needs C > |B|");
}

bool OptimizerS::is_normalized(double tol) const { return std::abs(C_ * C_ - B_ * B_ - 1.0) <= tol; }

OptimizerS OptimizerS::normalized() const {
  const double k = 1.0 / std::sqrt(C_ * C_ - B_ * B_);
  return OptimizerS(k * C_, k * B_, dp_);
}

double OptimizerS::value(double y) const { return std::pow(C_ + B_ * y, -(dp_.n - 2.0) / 2.0); }

Jet OptimizerS::phi(const Jet& y) const { return C_ + B_ * y; }

Jet OptimizerS::operator()(const Jet& y) const { return pow(phi(y), -(dp_.n - 2.0) / 2.0); }

double conformal_factor(double r, const DerivedParams& dp) {
  return std::pow(0.5 * (1.0 + std::pow(r, 2.0 * dp.alpha)), (dp.n - 2.0) / 2.0);
}

// (s + t r^{2a})(1 - y) = (s + t) + (t - s) y
OptimizerS conformal_E_to_S(const OptimizerE& f) {
  return OptimizerS(f.s() + f.t(), f.t() - f.s(), f.derived());
}

OptimizerE conformal_S_to_E(const OptimizerS& v) {
  return OptimizerE(0.5 * (v.C() - v.B()), 0.5 * (v.C() + v.B()), v.derived());
}

SFunction conformal_E_to_S(EFunction f, const DerivedParams& dp) {
  return [f = std::move(f), dp](double y, std::span<const double> theta) {
    const double r = radius_from_y(y, dp.alpha);
    std::vector<double> x(theta.begin(), theta.end());
    for (double& xi : x) xi *= r;
    return f(x) * std::pow(1.0 - y, -(dp.n - 2.0) / 2.0);
  };
}

EFunction conformal_S_to_E(SFunction F, const DerivedParams& dp) {
  return [F = std::move(F), dp](std::span<const double> x) {
    double r2 = 0;
    for (double xi : x) r2 += xi * xi;
    const double r = std::sqrt(r2);
    if (!(r > 0.0)) throw ChartError("conformal_S_to_E: x = 0 is outside the chart");
    std::vector<double> theta(x.begin(), x.end());
    for (double& t : theta) t /= r;
    return F(y_from_radius(r, dp.alpha), theta) / conformal_factor(r, dp);
  };
}

RadialProfile radial_profile(const OptimizerE& f) {
  return {[f](double r) { return f.value(r); }, [f](double r) { return f.derivative(r); }};
}

CknSides ckn_sides(const RadialProfile& f, const CknParams& params, const DerivedParams& dp,
                   const QuadratureOptions& opts, std::span<const double> r_breaks) {
  const double area = sphere_weight_area(params.weight), p = dp.p;
  // |x|^{-bp} r^{D-1} = r^{alpha n - 1}, |x|^{-2a} r^{D-1} = r^{2 - 2 alpha} r^{alpha n - 1}.
  // The gradient term decays one power of (1-y) slower at infinity.
  const double mass = integrate_radial_mu_E([&](double r) { return std::pow(std::abs(f.value(r)), p); }, dp,
                                            opts, r_breaks);
  const double grad = integrate_radial_mu_E(
      [&](double r) {
        const double g = f.derivative(r);
        return g * g * std::pow(r, 2.0 - 2.0 * dp.alpha);
      },
      dp, opts, r_breaks, 1.0);
  CknSides out;
  out.lhs = std::pow(area * mass, 2.0 / p);
  out.rhs = area * grad;
  out.ratio = out.lhs / out.rhs;
  return out;
}

CknSides ckn_sides(const ModelS& model, const AmbientFunction& F, const QuadratureOptions& opts,
                   std::span<const double> y_breaks) {
  const DerivedParams& dp = model.derived();
  const MonomialSphere& sphere = model.sphere();
  const double p = dp.p;
  auto integrand = [&](double y, std::span<const double> theta, std::span<double> out) {
    const SpherePoint pt = sphere.chart_point(theta);
    const std::vector<Jet> v = model.variables(y, pt);
    const Jet Fj = F(v);
    out[0] = std::pow(std::abs(Fj.value()), p);
    out[1] = model.at(y, pt).gamma(Fj);
    out[2] = Fj.value() * Fj.value();
  };
  const auto I = integrate_S_vector(integrand, 3, dp, sphere.weight(), opts, 0, y_breaks);
  CknSides s;
  s.lhs = std::pow(I[0], 2.0 / p);
  s.rhs = I[1] + dp.fs_lhs * dp.n * (dp.n - 2.0) / 4.0 * I[2];
  s.ratio = s.lhs / s.rhs;
  return s;
}

double euler_lagrange_residual(const ModelE& model, const OptimizerE& f, std::span<const double> x) {
  const DerivedParams& dp = f.derived();
  const Jet u = f(model.variables(x));
  const double lhs = -model.at(x).generator(u);
  const double rhs = dp.fs_lhs * dp.n * (dp.n - 2.0) * f.s() * f.t() * std::pow(u.value(), dp.p - 1.0);
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

std::vector<double> euler_lagrange_radii(const OptimizerE& f, int count) {
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : -3.0 + 6.0 * i / (count - 1);
    r[i] = std::pow(f.s() / f.t() * std::pow(10.0, u), 1.0 / (2.0 * f.derived().alpha));
  }
  return r;
}

TightSides tight_from_ckn(const CknSides& s, const ModelS& model) {
  const DerivedParams& dp = model.derived();
  const double Z = sphere_weight_area(model.sphere().weight()) * profile_mass(dp);
  const double Ap = 4.0 / (dp.fs_lhs * dp.n * (dp.n - 2.0));
  // rhs of ckn_sides = int Gamma + int F^2 / A_p, so A_p * rhs / Z is the tight rhs
  return {s.lhs * std::pow(Z, -2.0 / dp.p), Ap * s.rhs / Z};
}

TightSides tight_sobolev_sides(const ModelS& model, const AmbientFunction& F, const QuadratureOptions& opts,
                               std::span<const double> y_breaks) {
  return tight_from_ckn(ckn_sides(model, F, opts, y_breaks), model);
}

TightSides tight_sobolev_sides(const std::function<Jet(const Jet&)>& F, const DerivedParams& dp,
                               const QuadratureOptions& opts, std::span<const double> y_breaks) {
  const double M = profile_mass(dp), a2 = dp.fs_lhs, p = dp.p;
  auto at = [&](double y) { return F(Jet::variable(1, 0, y)); };
  const double Ip = integrate_radial_S([&](double y) { return std::pow(std::abs(at(y).value()), p); }, dp, opts,
                                       y_breaks);
  const double Ig = integrate_radial_S(
      [&](double y) {
        const double g = at(y).grad(0);
        return a2 * (1.0 - y * y) * g * g;
      },
      dp, opts, y_breaks);
  const double I2 = integrate_radial_S(
      [&](double y) {
        const double v = at(y).value();
        return v * v;
      },
      dp, opts, y_breaks);
  const double Ap = 4.0 / (a2 * dp.n * (dp.n - 2.0));
  return {std::pow(Ip / M, 2.0 / p), (Ap * Ig + I2) / M};
}

double phi_identity_residual(const ModelS& model, const OptimizerS& v, double y) {
  const DerivedParams& dp = model.derived();
  const SpherePoint pt = interior_point(model.sphere());
  const Jet Phi = v.phi(model.variables(y, pt)[0]);
  const LocalOperators ops = model.at(y, pt);
  const double P = Phi.value();
  return std::abs(P * ops.generator(Phi) - dp.n / 2.0 * ops.gamma(Phi) -
                  dp.n * dp.fs_lhs / 2.0 * (1.0 - P * P));
}

WeylCheck weyl_extension_check(std::span<const double> masses, double p) {
  if (!(p > 2.0)) throw DomainError("weyl_extension_check needs p > 2");
  WeylCheck out;
  double sum_q = 0;
  for (double m : masses) {
    if (m < 0.0 || std::isnan(m)) throw DomainError("weyl_extension_check: masses must be non-negative");
    out.l1 += m;
    sum_q += std::pow(m, p / 2.0);
  }
  out.lp2 = std::pow(sum_q, 2.0 / p);
  int nonzero = 0;
  for (double m : masses)
    if (m > 1e-14 * out.l1) ++nonzero;
  out.equality = nonzero <= 1;
  return out;
}

PerturbedOptimizer::PerturbedOptimizer(OptimizerS v, double e1, double e2, TrigPolynomial h, TrigPolynomial q,
                                       TrigPolynomial g)
    : v_(std::move(v)), e1_(e1), e2_(e2), h_(std::move(h)), q_(std::move(q)), g_(std::move(g)) {}

PerturbedOptimizer PerturbedOptimizer::random(SplitMix64& rng, const OptimizerS& v, int ambient_dim) {
  TrigPolynomial h = TrigPolynomial::random(rng, 1, 3, 3, {}, 1.0);
  TrigPolynomial q = TrigPolynomial::random(rng, 1, 2, 2, {}, 1.0).shifted(1.0);
  TrigPolynomial g = TrigPolynomial::random(rng, ambient_dim, 3, 2, {}, 1.0);
  // keep F > 0 so |F|^p stays smooth: |e1 h| <= 0.4, |e2 (1-y^2) q g| <= 0.4 min v
  const double vmin = v.value(v.B() > 0 ? 1.0 : -1.0);
  const double e1 = rng.uniform(-0.4, 0.4) / std::max(h.amplitude(), 1e-12);
  const double qa = std::abs(q.constant()) + q.amplitude(), ga = std::abs(g.constant()) + g.amplitude();
  const double e2 = rng.uniform(-0.4, 0.4) * vmin / std::max(qa * ga, 1e-12);
  return PerturbedOptimizer(v, e1, e2, std::move(h), std::move(q), std::move(g));
}

Jet PerturbedOptimizer::operator()(std::span<const Jet> vars) const {
  const Jet& y = vars[0];
  const std::span<const Jet> ys(&vars[0], 1);
  return v_(y) * (1.0 + e1_ * h_(ys)) + e2_ * (1.0 - y * y) * q_(ys) * g_(vars.subspan(1));
}

}  // namespace ckn
