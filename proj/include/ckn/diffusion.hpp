#pragma once

#include <array>
#include <span>
#include <vector>

#include "ckn/jet.hpp"

namespace ckn {

// Gamma, L and Gamma_2 at one chart point of a weighted manifold whose
// inverse metric is diagonal, g^{ii} = a_i, with dmu = e^P dx:
//   Gamma(f,h) = sum a_i f_i h_i
//   L f        = sum a_i f_ii + (a_i P_i + (a_i)_i) f_i
//   Gamma_2(f) = L(Gamma f)/2 - Gamma(f, L f)
// a_i and P must be order-3 jets in the chart variables.
class LocalOperators {
 public:
  LocalOperators(std::vector<double> point, std::array<Jet, kMaxJetDim> inverse_metric, Jet log_density);

  int dim() const { return static_cast<int>(point_.size()); }
  std::span<const double> point() const { return point_; }
  const Jet& inverse_metric(int i) const { return a_[i]; }
  const Jet& log_density() const { return P_; }

  Jet gamma_jet(const Jet& f, const Jet& h) const;
  Jet generator_jet(const Jet& f) const;

  double gamma(const Jet& f, const Jet& h) const;
  double gamma(const Jet& f) const { return gamma(f, f); }
  double generator(const Jet& f) const;
  double gamma2(const Jet& f) const;

 private:
  std::vector<double> point_;
  std::array<Jet, kMaxJetDim> a_;
  Jet P_;
};

}  // namespace ckn
