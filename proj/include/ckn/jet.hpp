#pragma once

#include <array>
#include <span>

namespace ckn {

inline constexpr int kMaxJetDim = 4;

namespace detail {

struct SymmetricIndex {
  std::array<std::array<int, kMaxJetDim>, kMaxJetDim> pair{};
  std::array<std::array<std::array<int, kMaxJetDim>, kMaxJetDim>, kMaxJetDim> triple{};
  constexpr SymmetricIndex() {
    int c = 0;
    for (int i = 0; i < kMaxJetDim; ++i)
      for (int j = i; j < kMaxJetDim; ++j) pair[i][j] = pair[j][i] = c++;
    c = 0;
    for (int i = 0; i < kMaxJetDim; ++i)
      for (int j = i; j < kMaxJetDim; ++j)
        for (int k = j; k < kMaxJetDim; ++k) {
          triple[i][j][k] = triple[i][k][j] = triple[j][i][k] = c;
          triple[j][k][i] = triple[k][i][j] = triple[k][j][i] = c;
          ++c;
        }
  }
};
inline constexpr SymmetricIndex kSym{};
inline constexpr int kPairs = kMaxJetDim * (kMaxJetDim + 1) / 2;
inline constexpr int kTriples = kMaxJetDim * (kMaxJetDim + 1) * (kMaxJetDim + 2) / 6;

}  // namespace detail

// Truncated Taylor data (value, gradient, Hessian, third derivatives) at a point.
// Symmetric tensors are stored packed, so symmetry holds by construction.
// order() tracks how many derivative levels are valid; it drops by one per
// derivative() and propagates as the minimum through arithmetic.
class Jet {
 public:
  static constexpr int kMaxOrder = 3;

  Jet() = default;
  Jet(int dim, double value, int order = kMaxOrder);
  static Jet variable(int dim, int index, double value);

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return v_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int j) const { return h_[detail::kSym.pair[i][j]]; }
  double third(int i, int j, int k) const { return t_[detail::kSym.triple[i][j][k]]; }

  void set_value(double v) { v_ = v; }
  void set_grad(int i, double v) { g_[i] = v; }
  void set_hess(int i, int j, double v) { h_[detail::kSym.pair[i][j]] = v; }
  void set_third(int i, int j, int k, double v) { t_[detail::kSym.triple[i][j][k]] = v; }

  // Jet of the partial derivative d/dx_i, one order lower.
  Jet derivative(int i) const;
  // Jet in the sub-variables vars (the rest frozen at the current point).
  Jet restrict_to(std::span<const int> vars) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double c);

  friend Jet operator*(const Jet& a, const Jet& b);
  // phi(u) from phi and its first three derivatives at u.value().
  friend Jet compose(const Jet& u, double f0, double f1, double f2, double f3);

 private:
  int dim_ = 0;
  int order_ = kMaxOrder;
  double v_ = 0.0;
  std::array<double, kMaxJetDim> g_{};
  std::array<double, detail::kPairs> h_{};
  std::array<double, detail::kTriples> t_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double q);
Jet square(const Jet& u);

}  // namespace ckn
