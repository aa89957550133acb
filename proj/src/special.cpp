#include "ckn/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ckn {

namespace {

constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

double log_gamma_lanczos(double x) {
  double y = x;
  double tmp = x + 5.24218750000000000;  // g = 671/128
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kLanczos) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

double log_profile_integral(double alpha, double n) {
  return 0.5 * std::log(std::numbers::pi) - std::log(alpha) + log_gamma(n / 2.0) -
         log_gamma((n + 1.0) / 2.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: x must be positive and finite");
  // Small arguments lose digits in the series; shift up with Gamma(x+1) = x Gamma(x).
  if (x < 1.0) return log_gamma_lanczos(x + 1.0) - std::log(x);
  return log_gamma_lanczos(x);
}

double log_sphere_weight_area(const MonomialWeight& w) {
  const double D = w.dim() + w.total();
  double s = std::log(D);
  for (double Ai : w.exponents()) s += log_gamma((Ai + 1.0) / 2.0);
  s -= w.charged_count() * std::numbers::ln2;
  s -= log_gamma(1.0 + D / 2.0);
  return s;
}

double sphere_weight_area(const MonomialWeight& w) { return std::exp(log_sphere_weight_area(w)); }

double cosh_profile_integral(double alpha, double n) {
  if (!(alpha > 0.0)) throw DomainError("cosh_profile_integral: alpha must be positive");
  if (!(n > 0.0)) throw DomainError("cosh_profile_integral: n must be positive");
  return std::exp(log_profile_integral(alpha, n));
}

double z_constant(const CknParams& params, const DerivedParams& dp) {
  return std::exp(log_sphere_weight_area(params.weight) + log_profile_integral(dp.alpha, dp.n));
}

double optimal_constant(const CknParams& params, const DerivedParams& dp) {
  const double logZ = log_sphere_weight_area(params.weight) + log_profile_integral(dp.alpha, dp.n);
  const double n = dp.n;
  return std::exp(std::log(4.0) - std::log(dp.fs_lhs * n * (n - 2.0)) - (2.0 / n) * logZ);
}

ClosedFormConstants closed_form_constants(const CknParams& params, const DerivedParams& dp) {
  ClosedFormConstants c;
  c.sphere_area = sphere_weight_area(params.weight);
  c.profile_integral = cosh_profile_integral(dp.alpha, dp.n);
  c.Z = z_constant(params, dp);
  c.C_opt = optimal_constant(params, dp);
  c.optimality_proven = dp.regime != Regime::Breaking;
  return c;
}

}  // namespace ckn
