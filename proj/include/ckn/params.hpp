#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckn/errors.hpp"

namespace ckn {

class MonomialWeight {
 public:
  MonomialWeight() = default;
  // Throws DomainError for d < 2 or a negative exponent.
  explicit MonomialWeight(std::vector<double> exponents);

  int dim() const { return static_cast<int>(A_.size()); }
  double exponent(int i) const { return A_[i]; }
  std::span<const double> exponents() const { return A_; }
  bool charged(int i) const { return A_[i] > 0.0; }
  int charged_count() const { return k_; }
  double total() const { return abs_; }
  bool last_uncharged() const { return !A_.empty() && A_.back() == 0.0; }

 private:
  std::vector<double> A_;
  int k_ = 0;
  double abs_ = 0.0;
};

struct CknParams {
  MonomialWeight weight;
  double a = 0.0;
  double b = 0.0;
};

enum class Regime { Symmetric, Threshold, Breaking };
std::string_view to_string(Regime r);

inline constexpr double kRegimeTieTolerance = 1e-12;

struct DerivedParams {
  double D = 0, p = 0, n = 0, alpha = 0, a_c = 0, delta = 0;
  double fs_lhs = 0;  // alpha^2
  double fs_rhs = 0;  // (D-1)/(n-1)
  Regime regime = Regime::Symmetric;
};

DerivedParams derive(const CknParams& params, double tie_tol = kRegimeTieTolerance);
Regime felli_schneider(const DerivedParams& dp, double tol = kRegimeTieTolerance);

// |alpha n - (D - b p)| and |2a - ((D-2) - alpha (n-2))|.
struct IdentityResiduals {
  double alpha_n = 0;
  double two_a = 0;
};
IdentityResiduals identity_residuals(const CknParams& params, const DerivedParams& dp);

struct HypothesisReport {
  bool n_above_four = false;
  bool last_exponent_zero = false;
  bool felli_schneider = false;
  bool strict_classification = false;  // alpha^2 <= (D-1)/(n-1) < 1
  bool all() const {
    return n_above_four && last_exponent_zero && felli_schneider && strict_classification;
  }
  std::vector<std::string> warnings() const;
};
HypothesisReport theorem_hypotheses(const CknParams& params, const DerivedParams& dp);

struct InterpolationExponents {
  double theta = 0;
  double r = 0;
  double identity_residual = 0;  // |2r - 2 theta p|
};
InterpolationExponents interpolation_exponents(double D, double p);

struct SubcriticalConstant {
  double nu = 0;
  double A_q = 0;
};
SubcriticalConstant subcritical_constant(double q, const DerivedParams& dp);

// A_p = 4/(alpha^2 n (n-2)).
double tight_sobolev_constant(const DerivedParams& dp);

}  // namespace ckn
