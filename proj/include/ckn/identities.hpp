#pragma once

#include <span>
#include <vector>

#include "ckn/models.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/test_functions.hpp"

namespace ckn {

// Gamma_2 - (D-2) Gamma - (L f)^2/(D-1) on the monomial sphere.
double cd_sphere_defect(const MonomialSphere& sphere, const LocalOperators& ops, const Jet& f);

struct HessianBound {
  double hessian = 0;            // nabla^2 W (grad f, grad f), Christoffel route
  double identity_residual = 0;  // vs Gamma(Gamma(W,f),f) - Gamma(Gamma(f)/2, W)
  double bound_slack = 0;        // hessian - |A| Gamma(f) - Gamma(W,f)^2/|A|; 0 when |A| = 0
};
HessianBound hessian_W_bound_residual(const MonomialSphere& sphere, const SpherePoint& pt, const Jet& f);

// Both sides of the warped decomposition
//   Gamma_2 - alpha^2(n-1) Gamma - (L f)^2/n
//     = (1/n)(alpha^2 (1-y^2) sqrt(n-1) f_yy - L_theta f / (sqrt(n-1)(1-y^2)))^2
//       + 2 alpha^2 Gamma^theta(y f/(1-y^2) + f_y)
//       + (Gamma_2^theta - alpha^2(n-2) Gamma^theta - (L_theta f)^2/(n-1)) / (1-y^2)^2
// f is a jet in the chart (y, z).
struct WarpedIdentity {
  double lhs = 0;
  double rhs = 0;
  double scale = 0;     // largest absolute term
  double residual = 0;  // |lhs - rhs| / scale
};
WarpedIdentity warped_identity(const ModelS& model, double y, const SpherePoint& pt, const Jet& f);

// |int (f L h + Gamma(f, h)) dmu_theta|, f and h functions of theta.
double ibp_residual_sphere(const MonomialSphere& sphere, const AmbientFunction& f, const AmbientFunction& h,
                           const QuadratureOptions& opts = {});

// |int (h L_S f + Gamma_S(h, f)) dmu_S| for h supported in |y| <= 1 - margin.
// f, h are functions of (y, theta). y_breaks lists points where h is not
// analytic. Throws DomainError if h is nonzero outside its declared support.
double ibp_residual_S(const ModelS& model, const AmbientFunction& f, const AmbientFunction& h, double margin,
                      const QuadratureOptions& opts = {}, std::span<const double> y_breaks = {});

// int over the sphere at fixed y of (Gamma_2^S - alpha^2(n-1)Gamma_S - (L_S f)^2/n) f^{1-nu}
// (weighted) and with weight 1 (unweighted). Throws DomainError if f <= 0 at a node.
struct IntegratedCd {
  double weighted = 0;
  double unweighted = 0;
};
IntegratedCd integrated_cd_defect(const ModelS& model, const AmbientFunction& f, double nu, double y,
                                  const QuadratureOptions& opts = {});

}  // namespace ckn
