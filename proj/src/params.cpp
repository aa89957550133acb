#include "ckn/params.hpp"

#include <cmath>
#include <sstream>

namespace ckn {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

MonomialWeight::MonomialWeight(std::vector<double> exponents) : A_(std::move(exponents)) {
  if (A_.size() < 2) throw DomainError("d < 2: dimension must be at least 2");
  for (std::size_t i = 0; i < A_.size(); ++i) {
    if (!(A_[i] >= 0.0) || !std::isfinite(A_[i]))
      throw DomainError("A_" + std::to_string(i + 1) + " < 0: exponents must be non-negative, got " +
                        fmt(A_[i]));
    if (A_[i] > 0.0) ++k_;
    abs_ += A_[i];
  }
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Symmetric: return "Symmetric";
    case Regime::Threshold: return "Threshold";
    case Regime::Breaking: return "Breaking";
  }
  return "?";
}

DerivedParams derive(const CknParams& params, double tie_tol) {
  const MonomialWeight& w = params.weight;
  if (w.dim() < 2) throw DomainError("d < 2: dimension must be at least 2");
  if (!std::isfinite(params.a) || !std::isfinite(params.b))
    throw DomainError("a and b must be finite");

  DerivedParams dp;
  dp.D = w.dim() + w.total();
  dp.delta = params.b - params.a;
  dp.a_c = (dp.D - 2.0) / 2.0;
  if (dp.delta == 1.0)
    throw DomainError("b - a = 1: the Hardy endpoint b = a + 1 is excluded");
  if (dp.delta < 0.0 || dp.delta > 1.0)
    throw DomainError("b - a = " + fmt(dp.delta) + " outside [0, 1)");
  if (params.a >= dp.a_c)
    throw DomainError("a >= a_c: need a < (D-2)/2 = " + fmt(dp.a_c) + ", got a = " + fmt(params.a));
  const double denom = dp.D - 2.0 + 2.0 * dp.delta;
  if (denom <= 0.0)
    throw DomainError("D - 2 + 2(b-a) <= 0: critical exponent p is undefined");

  dp.p = 2.0 * dp.D / denom;
  dp.n = dp.D / (1.0 - dp.delta);
  dp.alpha = 1.0 + params.a - params.b * dp.p / 2.0;
  if (!(dp.alpha > 0.0)) throw DomainError("alpha <= 0");
  dp.fs_lhs = dp.alpha * dp.alpha;
  dp.fs_rhs = (dp.D - 1.0) / (dp.n - 1.0);
  dp.regime = felli_schneider(dp, tie_tol);
  return dp;
}

Regime felli_schneider(const DerivedParams& dp, double tol) {
  const double diff = dp.fs_lhs - dp.fs_rhs;
  if (std::abs(diff) <= tol) return Regime::Threshold;
  return diff < 0.0 ? Regime::Symmetric : Regime::Breaking;
}

IdentityResiduals identity_residuals(const CknParams& params, const DerivedParams& dp) {
  IdentityResiduals r;
  r.alpha_n = std::abs(dp.alpha * dp.n - (dp.D - params.b * dp.p));
  r.two_a = std::abs(2.0 * params.a - ((dp.D - 2.0) - dp.alpha * (dp.n - 2.0)));
  return r;
}

HypothesisReport theorem_hypotheses(const CknParams& params, const DerivedParams& dp) {
  HypothesisReport h;
  h.n_above_four = dp.n > 4.0;
  h.last_exponent_zero = params.weight.last_uncharged();
  h.felli_schneider = dp.regime != Regime::Breaking;
  h.strict_classification = h.felli_schneider && dp.fs_rhs < 1.0;
  return h;
}

std::vector<std::string> HypothesisReport::warnings() const {
  std::vector<std::string> out;
  if (!n_above_four) out.emplace_back("n <= 4: density/regularity hypothesis n > 4 not met");
  if (!last_exponent_zero) out.emplace_back("A_d != 0: theorem requires an uncharged last coordinate");
  if (!felli_schneider) out.emplace_back("Felli-Schneider condition fails: radial optimality not proven");
  if (!strict_classification)
    out.emplace_back("alpha^2 <= (D-1)/(n-1) < 1 fails: optimizer classification not covered");
  return out;
}

InterpolationExponents interpolation_exponents(double D, double p) {
  if (!(D > 2.0)) throw DomainError("interpolation exponents need D > 2");
  const double p_max = 2.0 * D / (D - 2.0);
  const double slack = 1e-14 * p_max;
  if (!(p >= 2.0 - slack && p <= p_max + slack))
    throw DomainError("p = " + fmt(p) + " outside [2, 2D/(D-2)]");
  InterpolationExponents e;
  e.theta = D / p - (D - 2.0) / 2.0;
  e.r = D + (p / 2.0) * (2.0 - D);
  e.identity_residual = std::abs(2.0 * e.r - 2.0 * e.theta * p);
  return e;
}

SubcriticalConstant subcritical_constant(double q, const DerivedParams& dp) {
  if (!(q > 2.0 && q < dp.p)) throw DomainError("q = " + fmt(q) + " outside (2, p)");
  SubcriticalConstant c;
  c.nu = 2.0 * q / (q - 2.0);
  c.A_q = 4.0 * (c.nu - 1.0) / (c.nu * (c.nu - 2.0) * dp.fs_lhs * (dp.n - 1.0));
  return c;
}

double tight_sobolev_constant(const DerivedParams& dp) {
  return 4.0 / (dp.fs_lhs * dp.n * (dp.n - 2.0));
}

}  // namespace ckn
