#include "ckn/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckn {

using detail::kSym;

Jet::Jet(int dim, double value, int order) : dim_(dim), order_(order), v_(value) {
  if (dim < 0 || dim > kMaxJetDim) throw std::invalid_argument("Jet: dimension out of range");
}

Jet Jet::variable(int dim, int index, double value) {
  Jet j(dim, value);
  j.g_[index] = 1.0;
  return j;
}

Jet Jet::derivative(int i) const {
  if (order_ < 1) throw std::logic_error("Jet::derivative on an order-0 jet");
  Jet d(dim_, g_[i], order_ - 1);
  for (int j = 0; j < dim_; ++j) {
    d.g_[j] = hess(i, j);
    for (int k = j; k < dim_; ++k) d.h_[kSym.pair[j][k]] = third(i, j, k);
  }
  return d;
}

Jet Jet::restrict_to(std::span<const int> vars) const {
  const int m = static_cast<int>(vars.size());
  Jet r(m, v_, order_);
  for (int a = 0; a < m; ++a) {
    r.g_[a] = g_[vars[a]];
    for (int b = a; b < m; ++b) {
      r.h_[kSym.pair[a][b]] = hess(vars[a], vars[b]);
      for (int c = b; c < m; ++c) r.t_[kSym.triple[a][b][c]] = third(vars[a], vars[b], vars[c]);
    }
  }
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  dim_ = std::max(dim_, o.dim_);
  order_ = std::min(order_, o.order_);
  v_ += o.v_;
  for (int i = 0; i < kMaxJetDim; ++i) g_[i] += o.g_[i];
  for (int i = 0; i < detail::kPairs; ++i) h_[i] += o.h_[i];
  for (int i = 0; i < detail::kTriples; ++i) t_[i] += o.t_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  dim_ = std::max(dim_, o.dim_);
  order_ = std::min(order_, o.order_);
  v_ -= o.v_;
  for (int i = 0; i < kMaxJetDim; ++i) g_[i] -= o.g_[i];
  for (int i = 0; i < detail::kPairs; ++i) h_[i] -= o.h_[i];
  for (int i = 0; i < detail::kTriples; ++i) t_[i] -= o.t_[i];
  return *this;
}

Jet& Jet::operator*=(double c) {
  v_ *= c;
  for (auto& x : g_) x *= c;
  for (auto& x : h_) x *= c;
  for (auto& x : t_) x *= c;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(std::max(a.dim_, b.dim_), a.v_ * b.v_, std::min(a.order_, b.order_));
  const int n = r.dim_;
  for (int i = 0; i < n; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      r.h_[kSym.pair[i][j]] = a.hess(i, j) * b.v_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] +
                              a.v_ * b.hess(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        r.t_[kSym.triple[i][j][k]] =
            a.third(i, j, k) * b.v_ + a.hess(i, j) * b.g_[k] + a.hess(i, k) * b.g_[j] +
            a.hess(j, k) * b.g_[i] + a.g_[i] * b.hess(j, k) + a.g_[j] * b.hess(i, k) +
            a.g_[k] * b.hess(i, j) + a.v_ * b.third(i, j, k);
  return r;
}

Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
  Jet r(u.dim_, f0, u.order_);
  const int n = u.dim_;
  for (int i = 0; i < n; ++i) r.g_[i] = f1 * u.g_[i];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      r.h_[kSym.pair[i][j]] = f2 * u.g_[i] * u.g_[j] + f1 * u.hess(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        r.t_[kSym.triple[i][j][k]] =
            f3 * u.g_[i] * u.g_[j] * u.g_[k] +
            f2 * (u.hess(i, j) * u.g_[k] + u.hess(i, k) * u.g_[j] + u.hess(j, k) * u.g_[i]) +
            f1 * u.third(i, j, k);
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator+(Jet a, double c) {
  a.set_value(a.value() + c);
  return a;
}
Jet operator+(double c, Jet a) { return std::move(a) + c; }
Jet operator-(Jet a, double c) { return std::move(a) + (-c); }
Jet operator-(double c, const Jet& a) { return (-a) + c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a *= 1.0 / c; }

Jet operator/(double c, const Jet& a) {
  const double v = a.value();
  const double r = 1.0 / v;
  return c * compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose(u, s, c, -s, -c);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose(u, c, -s, -c, s);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return compose(u, e, e, e, e);
}

Jet log(const Jet& u) {
  const double v = u.value();
  const double r = 1.0 / v;
  return compose(u, std::log(v), r, -r * r, 2.0 * r * r * r);
}

Jet pow(const Jet& u, double q) {
  const double v = u.value();
  const double p = std::pow(v, q - 3.0);
  return compose(u, p * v * v * v, q * p * v * v, q * (q - 1.0) * p * v,
                 q * (q - 1.0) * (q - 2.0) * p);
}

Jet sqrt(const Jet& u) { return pow(u, 0.5); }

Jet square(const Jet& u) { return u * u; }

}  // namespace ckn
