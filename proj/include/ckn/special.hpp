#pragma once

#include "ckn/params.hpp"

namespace ckn {

// Lanczos approximation, thread-safe. Throws DomainError for x <= 0.
double log_gamma(double x);

// log of D * prod Gamma((A_i+1)/2) / (2^k Gamma(1 + D/2)).
double log_sphere_weight_area(const MonomialWeight& w);
double sphere_weight_area(const MonomialWeight& w);

// int_R cosh(alpha u)^{-n} du = sqrt(pi)/alpha * Gamma(n/2)/Gamma((n+1)/2).
double cosh_profile_integral(double alpha, double n);

struct ClosedFormConstants {
  double sphere_area = 0;
  double profile_integral = 0;
  double Z = 0;
  double C_opt = 0;
  bool optimality_proven = false;  // false outside the Felli-Schneider region
};

double z_constant(const CknParams& params, const DerivedParams& dp);
double optimal_constant(const CknParams& params, const DerivedParams& dp);
ClosedFormConstants closed_form_constants(const CknParams& params, const DerivedParams& dp);

}  // namespace ckn
