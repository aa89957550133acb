#include "ckn/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ckn {

namespace {

std::vector<int> sphere_slots(int d) {
  std::vector<int> v(d - 1);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

}  // namespace

double cd_sphere_defect(const MonomialSphere& sphere, const LocalOperators& ops, const Jet& f) {
  const double D = sphere.monomial_dimension();
  const double Lf = ops.generator(f);
  return ops.gamma2(f) - (D - 2.0) * ops.gamma(f) - Lf * Lf / (D - 1.0);
}

HessianBound hessian_W_bound_residual(const MonomialSphere& sphere, const SpherePoint& pt, const Jet& f) {
  const LocalOperators ops = sphere.at(pt);
  const Jet W = sphere.weight_potential(pt);
  HessianBound r;
  r.hessian = sphere.weight_hessian(pt, f);
  const double via_gamma = ops.gamma(ops.gamma_jet(W, f), f) - ops.gamma(0.5 * ops.gamma_jet(f, f), W);
  r.identity_residual = std::abs(r.hessian - via_gamma);
  const double absA = sphere.weight().total();
  if (absA > 0) {
    const double gWf = ops.gamma(W, f);
    r.bound_slack = r.hessian - absA * ops.gamma(f) - gWf * gWf / absA;
  }
  return r;
}

WarpedIdentity warped_identity(const ModelS& model, double y, const SpherePoint& pt, const Jet& f) {
  const DerivedParams& dp = model.derived();
  const double a2 = dp.alpha * dp.alpha, n = dp.n;
  const LocalOperators S = model.at(y, pt);
  const LocalOperators T = model.sphere().at(pt);
  const std::vector<int> slots = sphere_slots(model.dim());

  const double LSf = S.generator(f);
  const double g2 = S.gamma2(f), g1 = a2 * (n - 1.0) * S.gamma(f), l2 = LSf * LSf / n;

  const Jet ft = f.restrict_to(slots);
  const Jet fyt = f.derivative(0).restrict_to(slots);
  const double w = 1.0 - y * y;
  const double Lt = T.generator(ft);
  const double sq = std::sqrt(n - 1.0);
  const double inner = a2 * w * sq * f.hess(0, 0) - Lt / (sq * w);
  const double t1 = inner * inner / n;
  const double t2 = 2.0 * a2 * T.gamma((y / w) * ft + fyt);
  const double t3 = (T.gamma2(ft) - a2 * (n - 2.0) * T.gamma(ft) - Lt * Lt / (n - 1.0)) / (w * w);

  WarpedIdentity r;
  r.lhs = g2 - g1 - l2;
  r.rhs = t1 + t2 + t3;
  r.scale = std::max({std::abs(g2), std::abs(g1), std::abs(l2), std::abs(t1), std::abs(t2), std::abs(t3)});
  r.residual = r.scale > 0 ? std::abs(r.lhs - r.rhs) / r.scale : 0.0;
  return r;
}

double ibp_residual_sphere(const MonomialSphere& sphere, const AmbientFunction& f, const AmbientFunction& h,
                           const QuadratureOptions& opts) {
  auto integrand = [&](std::span<const double> theta) {
    const SpherePoint pt = sphere.chart_point(theta);
    const LocalOperators ops = sphere.at(pt);
    const std::vector<Jet> th = sphere.embedding(pt);
    const Jet fj = f(th), hj = h(th);
    return fj.value() * ops.generator(hj) + ops.gamma(fj, hj);
  };
  return std::abs(integrate_sphere(integrand, sphere.weight(), opts, 1));
}

double ibp_residual_S(const ModelS& model, const AmbientFunction& f, const AmbientFunction& h, double margin,
                      const QuadratureOptions& opts, std::span<const double> y_breaks) {
  if (!(margin > 0.0 && margin < 1.0)) throw DomainError("ibp_residual_S: margin must be in (0, 1)");
  const MonomialSphere& sphere = model.sphere();
  const SphereRule probe = make_sphere_rule(sphere.weight(), 4);
  for (double y : {-1.0 + margin / 2, -1.0 + margin / 4, 1.0 - margin / 4, 1.0 - margin / 2})
    for (std::size_t i = 0; i < probe.size(); ++i) {
      const SpherePoint pt = sphere.chart_point(probe.point(i));
      if (h(model.variables(y, pt)).value() != 0.0)
        throw DomainError("ibp_residual_S: h is nonzero outside its declared support (support violation)");
    }
  std::vector<double> breaks(y_breaks.begin(), y_breaks.end());
  breaks.push_back(-1.0 + margin);
  breaks.push_back(1.0 - margin);
  auto integrand = [&](double y, std::span<const double> theta) {
    if (std::abs(y) >= 1.0 - margin) return 0.0;
    const SpherePoint pt = sphere.chart_point(theta);
    const LocalOperators ops = model.at(y, pt);
    const std::vector<Jet> v = model.variables(y, pt);
    const Jet fj = f(v), hj = h(v);
    return hj.value() * ops.generator(fj) + ops.gamma(hj, fj);
  };
  return std::abs(integrate_S(integrand, model.derived(), sphere.weight(), opts, 1, breaks));
}

IntegratedCd integrated_cd_defect(const ModelS& model, const AmbientFunction& f, double nu, double y,
                                  const QuadratureOptions& opts) {
  const DerivedParams& dp = model.derived();
  const double a2 = dp.alpha * dp.alpha, n = dp.n;
  const MonomialSphere& sphere = model.sphere();
  auto defect = [&](std::span<const double> theta, double power) {
    const SpherePoint pt = sphere.chart_point(theta);
    const LocalOperators ops = model.at(y, pt);
    const Jet fj = f(model.variables(y, pt));
    if (!(fj.value() > 0.0)) throw DomainError("integrated_cd_defect: f must be positive (positivity violation)");
    const double Lf = ops.generator(fj);
    const double d = ops.gamma2(fj) - a2 * (n - 1.0) * ops.gamma(fj) - Lf * Lf / n;
    return power == 0.0 ? d : d * std::pow(fj.value(), power);
  };
  IntegratedCd r;
  r.weighted = integrate_sphere([&](auto th) { return defect(th, 1.0 - nu); }, sphere.weight(), opts);
  r.unweighted = integrate_sphere([&](auto th) { return defect(th, 0.0); }, sphere.weight(), opts);
  return r;
}

}  // namespace ckn
