#include "ckn/diffusion.hpp"

namespace ckn {

LocalOperators::LocalOperators(std::vector<double> point, std::array<Jet, kMaxJetDim> inverse_metric,
                               Jet log_density)
    : point_(std::move(point)), a_(std::move(inverse_metric)), P_(std::move(log_density)) {}

Jet LocalOperators::gamma_jet(const Jet& f, const Jet& h) const {
  Jet s(dim(), 0.0);
  for (int i = 0; i < dim(); ++i) s += a_[i] * (f.derivative(i) * h.derivative(i));
  return s;
}

Jet LocalOperators::generator_jet(const Jet& f) const {
  Jet s(dim(), 0.0);
  for (int i = 0; i < dim(); ++i) {
    const Jet fi = f.derivative(i);
    s += a_[i] * fi.derivative(i);
    s += (a_[i] * P_.derivative(i) + a_[i].derivative(i)) * fi;
  }
  return s;
}

double LocalOperators::gamma(const Jet& f, const Jet& h) const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += a_[i].value() * f.grad(i) * h.grad(i);
  return s;
}

double LocalOperators::generator(const Jet& f) const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double ai = a_[i].value();
    s += ai * f.hess(i, i) + (ai * P_.grad(i) + a_[i].grad(i)) * f.grad(i);
  }
  return s;
}

double LocalOperators::gamma2(const Jet& f) const {
  return 0.5 * generator(gamma_jet(f, f)) - gamma(f, generator_jet(f));
}

}  // namespace ckn
