#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckn/params.hpp"
#include "ckn/quadrature.hpp"

namespace ckn {

struct SpectralOptions {
  int nodes = 64;               // quadrature nodes per direction
  double gram_cutoff = 1e-10;   // relative eigenvalue cutoff for the Gram reduction
  Execution execution = Execution::Parallel;
};

// Smallest nonzero eigenvalue of -L_theta on the monomial sphere via
// Rayleigh-Ritz over mean-zero ambient monomials of degree <= degree.
double sphere_first_eigenvalue(const MonomialWeight& w, int degree, const SpectralOptions& opts = {});

// Same over radial polynomials y^k, k = 1..degree, on S.
double radial_spectral_gap_S(const DerivedParams& dp, int degree, const SpectralOptions& opts = {});

// Rayleigh-Ritz over products y^j theta^k with j + |k| <= degree (reported
// against D/2, not asserted).
double spectral_gap_S(const CknParams& params, const DerivedParams& dp, int degree,
                      const SpectralOptions& opts = {});

// alpha^2 n = (p - 2)/A_p.
double stability_threshold(const DerivedParams& dp);

struct TestQuotient {
  double quadrature = 0;   // int Gamma_S(g) / int g^2 for g = sqrt(1-y^2) theta_d
  double closed_form = 0;  // (alpha^2 + (n+1) lambda)/n
};
TestQuotient nonradial_test_quotient(const CknParams& params, const DerivedParams& dp, double lambda_theta,
                                     const QuadratureOptions& opts = {});
double nonradial_test_quotient_closed(const DerivedParams& dp, double lambda_theta);

enum class Verdict { Stable, NeutralThreshold, Unstable };
std::string to_string(Verdict v);

struct BreakingVerdict {
  double lambda_theta_1 = 0;
  double test_quotient = 0;
  double threshold = 0;
  Verdict verdict = Verdict::Stable;
  bool agrees_with_fs = false;
};

double verdict_tolerance(double threshold);
Verdict classify(double quotient, double threshold);
bool agrees(Verdict v, Regime r);

// lambda_theta_1 may be supplied to skip the eigen-solve (it depends on the weight only).
BreakingVerdict symmetry_breaking_detector(const CknParams& params, int degree = 4, const SpectralOptions& opts = {},
                                           std::optional<double> lambda_theta_1 = std::nullopt);

struct ScanRow {
  double a = 0;
  double b = 0;
  bool valid = false;
  std::string skip_reason;
  DerivedParams dp;
  BreakingVerdict verdict;
  double quotient_quadrature = 0;  // raw quadrature of the test quotient
};

// Grid a_i in [a_min, a_max], b = a + delta_j with delta_j in [delta_min, delta_max].
struct ScanGrid {
  double a_min = -1.0, a_max = 0.4;
  double delta_min = 0.0, delta_max = 0.9;
  int steps_a = 20, steps_b = 20;
};

// Rows in grid order (a outer, delta inner); rows are computed in parallel.
std::vector<ScanRow> phase_scan(const MonomialWeight& w, const ScanGrid& grid, int degree = 4,
                                const SpectralOptions& opts = {}, const QuadratureOptions& quad = {});

}  // namespace ckn
