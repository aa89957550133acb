#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ckn/models.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/random.hpp"
#include "ckn/test_functions.hpp"

namespace ckn {

// f(x) = (s + t|x|^{2 alpha})^{-(n-2)/2}.
class OptimizerE {
 public:
  OptimizerE(double s, double t, const DerivedParams& dp);

  double s() const { return s_; }
  double t() const { return t_; }
  const DerivedParams& derived() const { return dp_; }

  double value(double r) const;
  double derivative(double r) const;  // d/dr
  Jet operator()(std::span<const Jet> x) const;

 private:
  double s_, t_;
  DerivedParams dp_;
};

// v(y) = Phi^{-(n-2)/2}, Phi = C + B y, C > |B|.
class OptimizerS {
 public:
  OptimizerS(double C, double B, const DerivedParams& dp);

  double C() const { return C_; }
  double B() const { return B_; }
  const DerivedParams& derived() const { return dp_; }
  bool is_normalized(double tol = 1e-12) const;
  OptimizerS normalized() const;  // scaled so C^2 - B^2 = 1

  double value(double y) const;
  Jet phi(const Jet& y) const;
  Jet operator()(const Jet& y) const;

 private:
  double C_, B_;
  DerivedParams dp_;
};

// F = f phi^{(n-2)/2}, phi = (1 + |x|^{2 alpha})/2 = 1/(1-y).
double conformal_factor(double r, const DerivedParams& dp);
OptimizerS conformal_E_to_S(const OptimizerE& f);
OptimizerE conformal_S_to_E(const OptimizerS& v);

using EFunction = std::function<double(std::span<const double> x)>;
using SFunction = std::function<double(double y, std::span<const double> theta)>;
SFunction conformal_E_to_S(EFunction f, const DerivedParams& dp);
EFunction conformal_S_to_E(SFunction F, const DerivedParams& dp);

struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};
RadialProfile radial_profile(const OptimizerE& f);

struct CknSides {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};

// (int |f|^p |x|^{-bp} x^A dx)^{2/p} and int |f'|^2 |x|^{-2a} x^A dx for radial f.
CknSides ckn_sides(const RadialProfile& f, const CknParams& params, const DerivedParams& dp,
                   const QuadratureOptions& opts = {}, std::span<const double> r_breaks = {});

// Same quotient transported to S: the gradient term becomes
// int Gamma_S(F) dmu_S + alpha^2 n(n-2)/4 int F^2 dmu_S. F takes ModelS variables.
CknSides ckn_sides(const ModelS& model, const AmbientFunction& F, const QuadratureOptions& opts = {},
                   std::span<const double> y_breaks = {});

// -L_E f - alpha^2 n(n-2) s t f^{p-1}, relative to the larger side.
// The two sides cancel like (t r^{2 alpha}/s)^{-1}, so sample radii in that variable.
double euler_lagrange_residual(const ModelE& model, const OptimizerE& f, std::span<const double> x);
// count radii with t r^{2 alpha}/s log-spaced over [1e-3, 1e3].
std::vector<double> euler_lagrange_radii(const OptimizerE& f, int count);

// lhs = ||F||_p^2, rhs = A_p int Gamma_S(F) + ||F||_2^2 on mu_S / Z, A_p = 4/(alpha^2 n(n-2)).
struct TightSides {
  double lhs = 0;
  double rhs = 0;
};
TightSides tight_sobolev_sides(const ModelS& model, const AmbientFunction& F, const QuadratureOptions& opts = {},
                               std::span<const double> y_breaks = {});
// Tight sides from the S-side CKN integrals of the same function.
TightSides tight_from_ckn(const CknSides& s, const ModelS& model);
// Radial F(y) only; the sphere factor cancels in mu_S / Z.
TightSides tight_sobolev_sides(const std::function<Jet(const Jet&)>& F, const DerivedParams& dp,
                               const QuadratureOptions& opts = {}, std::span<const double> y_breaks = {});

// |Phi L_S Phi - (n/2) Gamma_S(Phi) - (n alpha^2/2)(1 - Phi^2)|, evaluated with jets.
double phi_identity_residual(const ModelS& model, const OptimizerS& v, double y);

struct WeylCheck {
  double l1 = 0;
  double lp2 = 0;
  bool equality = false;
};
WeylCheck weyl_extension_check(std::span<const double> masses, double p);

// F = v(y)(1 + e1 h(y)) + e2 (1-y^2) q(y) g(theta) around a normalized radial optimizer.
class PerturbedOptimizer {
 public:
  static PerturbedOptimizer random(SplitMix64& rng, const OptimizerS& v, int ambient_dim);
  Jet operator()(std::span<const Jet> vars) const;  // vars = [y, theta...]

 private:
  PerturbedOptimizer(OptimizerS v, double e1, double e2, TrigPolynomial h, TrigPolynomial q, TrigPolynomial g);

  OptimizerS v_;
  double e1_, e2_;
  TrigPolynomial h_, q_, g_;
};

}  // namespace ckn
