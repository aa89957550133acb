#include "ckn/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "ckn/special.hpp"

namespace ckn {

namespace {

constexpr double kPi = std::numbers::pi;

struct Recurrence {
  std::vector<double> a;   // diagonal alpha_k, k = 0..m-1
  std::vector<double> sb;  // sqrt(beta_k), k = 1..m (index k)
  double mu0 = 0.0;
};

// Monic Jacobi recurrence for (1-t)^ar (1+t)^bl.
Recurrence jacobi_recurrence(int m, double bl, double ar) {
  const double a = ar, b = bl, ab = a + b;
  Recurrence r;
  r.a.resize(m);
  r.sb.assign(m + 1, 0.0);
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      r.a[0] = (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      r.a[k] = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k <= m; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    r.sb[k] = std::sqrt(beta);
  }
  r.mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) -
                   log_gamma(ab + 2.0));
  return r;
}

// Orthonormal p_m(x), p_m'(x) and sum_{k<m} p_k(x)^2.
struct Eval {
  double pm, dpm, sumsq;
};

Eval orthonormal(const Recurrence& r, int m, double x) {
  double pprev = 0.0, p = 1.0 / std::sqrt(r.mu0);
  double dprev = 0.0, dp = 0.0;
  double sumsq = 0.0;
  for (int k = 0; k < m; ++k) {
    sumsq += p * p;
    const double pn = ((x - r.a[k]) * p - r.sb[k] * pprev) / r.sb[k + 1];
    const double dn = (p + (x - r.a[k]) * dp - r.sb[k] * dprev) / r.sb[k + 1];
    pprev = p;
    p = pn;
    dprev = dp;
    dp = dn;
  }
  return {p, dp, sumsq};
}

template <class Evaluate>
double doubling(Evaluate&& evaluate, const QuadratureOptions& opts, const char* what) {
  int m = std::max(1, std::min(opts.initial_nodes, opts.max_nodes));
  auto [prev, prev_scale] = evaluate(m);
  (void)prev_scale;
  while (2 * m <= opts.max_nodes) {
    m *= 2;
    auto [cur, scale] = evaluate(m);
    if (std::abs(cur - prev) <= opts.rel_tol * std::max(scale, 1e-300)) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os.precision(17);
  os << what << ": node doubling did not converge by m = " << m << " (last estimate " << prev << ")";
  throw ConvergenceError(os.str());
}

std::pair<double, double> weighted_sum(std::size_t count, const std::function<double(std::size_t)>& term,
                                       Execution exec) {
  std::vector<double> t = parallel::map(count, term, exec);
  std::vector<double> a(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) a[i] = std::abs(t[i]);
  return {parallel::pairwise_sum(t), parallel::pairwise_sum(a)};
}

// One angle factor |sin|^q or |cos|^q on an interval.
struct AngleFactor {
  bool is_sin;
  double q;
  double charged_q;  // part of q coming from a weight exponent
};

bool vanishes(bool is_sin, double x) {
  return is_sin ? std::abs(std::sin(x)) < 1e-12 : std::abs(std::cos(x)) < 1e-12;
}

struct AngleRule {
  std::vector<double> nodes, weights;
};

AngleRule angle_rule(double lo, double hi, const std::vector<AngleFactor>& factors, int m,
                     int singular_order) {
  double eL = 0, eR = 0, cL = 0, cR = 0;
  struct Flags {
    bool l, r;
  };
  std::vector<Flags> flags;
  for (const auto& f : factors) {
    Flags fl{false, false};
    if (f.q > 0) {
      fl.l = vanishes(f.is_sin, lo);
      fl.r = vanishes(f.is_sin, hi);
      if (fl.l) eL += f.q, cL += f.charged_q;
      if (fl.r) eR += f.q, cR += f.charged_q;
    }
    flags.push_back(fl);
  }
  const double sL = (singular_order > 0 && cL > 0) ? singular_order : 0.0;
  const double sR = (singular_order > 0 && cR > 0) ? singular_order : 0.0;
  const double jl = eL - sL, jr = eR - sR;
  const QuadratureRule1D& base = cached_gauss_jacobi(m, jl, jr);
  const double half = (hi - lo) / 2.0;
  const double scale = std::pow(half, 1.0 + jl + jr);
  AngleRule out;
  out.nodes.resize(m);
  out.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    const double t = base.nodes[i];
    const double dL = half * (1.0 + t), dR = half * (1.0 - t);
    const double x = lo + dL;
    double w = base.weights[i] * scale;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      if (factors[f].q == 0) continue;
      double ratio;
      if (flags[f].l && flags[f].r) {
        ratio = std::sin(std::min(dL, dR)) / (dL * dR);
      } else if (flags[f].l) {
        ratio = std::sin(dL) / dL;
      } else if (flags[f].r) {
        ratio = std::sin(dR) / dR;
      } else {
        ratio = std::abs(factors[f].is_sin ? std::sin(x) : std::cos(x));
      }
      w *= std::pow(ratio, factors[f].q);
    }
    if (sL > 0) w *= std::pow(dL, sL);
    if (sR > 0) w *= std::pow(dR, sR);
    out.nodes[i] = x;
    out.weights[i] = w;
  }
  return out;
}

// Azimuth range and factors for the first two coordinates (A1 on cos, A2 on sin).
AngleRule azimuth_rule(double A1, double A2, int m, int singular_order) {
  double lo, hi;
  if (A1 > 0 && A2 > 0) {
    lo = 0.0, hi = kPi / 2;
  } else if (A1 > 0) {
    lo = -kPi / 2, hi = kPi / 2;
  } else if (A2 > 0) {
    lo = 0.0, hi = kPi;
  } else {
    lo = -kPi, hi = kPi;
  }
  return angle_rule(lo, hi, {{false, A1, A1}, {true, A2, A2}}, m, singular_order);
}

}  // namespace

QuadratureRule1D gauss_jacobi(int m, double beta_left, double beta_right) {
  if (m < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(beta_left > -1.0) || !(beta_right > -1.0))
    throw DomainError("gauss_jacobi: exponents must exceed -1");
  const Recurrence rec = jacobi_recurrence(m, beta_left, beta_right);

  QuadratureRule1D rule;
  rule.kind = (beta_left == 0.0 && beta_right == 0.0) ? MeasureKind::Legendre : MeasureKind::Jacobi;
  rule.beta_left = beta_left;
  rule.beta_right = beta_right;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  if (m == 1) {
    rule.nodes[0] = rec.a[0];
  } else {
    Eigen::VectorXd diag(m), sub(m - 1);
    for (int k = 0; k < m; ++k) diag[k] = rec.a[k];
    for (int k = 1; k < m; ++k) sub[k - 1] = rec.sb[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < m; ++i) rule.nodes[i] = es.eigenvalues()[i];
  }
  for (int i = 0; i < m; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      const Eval e = orthonormal(rec, m, x);
      if (e.dpm == 0.0) break;
      const double step = e.pm / e.dpm;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    x = std::clamp(x, std::nextafter(-1.0, 0.0), std::nextafter(1.0, 0.0));
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / orthonormal(rec, m, x).sumsq;
  }
  return rule;
}

QuadratureRule1D gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

const QuadratureRule1D& cached_gauss_jacobi(int m, double beta_left, double beta_right) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<QuadratureRule1D>> cache;
  const Key key{m, beta_left, beta_right};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<QuadratureRule1D>(gauss_jacobi(m, beta_left, beta_right));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

double y_from_radius(double r, double alpha) {
  const double s = std::pow(r, 2.0 * alpha);
  if (std::isinf(s)) return 1.0;
  return (s - 1.0) / (s + 1.0);
}

double radius_from_y(double y, double alpha) {
  return std::pow((1.0 + y) / (1.0 - y), 1.0 / (2.0 * alpha));
}

WeightedRule radial_rule(double el, double er, double scale, int m, std::span<const double> y_breaks) {
  std::vector<double> cuts{-1.0};
  std::vector<double> inner(y_breaks.begin(), y_breaks.end());
  std::sort(inner.begin(), inner.end());
  for (double y : inner)
    if (y > cuts.back() && y < 1.0) cuts.push_back(y);
  cuts.push_back(1.0);

  WeightedRule out;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    const bool left_end = (lo == -1.0), right_end = (hi == 1.0);
    const double bl = left_end ? el : 0.0, br = right_end ? er : 0.0;
    const QuadratureRule1D& base = cached_gauss_jacobi(m, bl, br);
    const double half = (hi - lo) / 2.0;
    const double seg_scale = std::pow(half, 1.0 + bl + br) * scale;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double t = base.nodes[i];
      const double y = lo + half * (1.0 + t);
      double w = base.weights[i] * seg_scale;
      if (!left_end) w *= std::pow(1.0 + y, el);
      if (!right_end) w *= std::pow(1.0 - y, er);
      out.nodes.push_back(y);
      out.weights.push_back(w);
    }
  }
  return out;
}

WeightedRule radial_rule_S(const DerivedParams& dp, int m, std::span<const double> y_breaks) {
  const double e = dp.n / 2.0 - 1.0;
  return radial_rule(e, e, 1.0 / dp.alpha, m, y_breaks);
}

double integrate_radial(const std::function<double(double)>& h, double el, double er, double scale,
                        const QuadratureOptions& opts, std::span<const double> y_breaks) {
  return doubling(
      [&](int m) {
        const WeightedRule rule = radial_rule(el, er, scale, m, y_breaks);
        return weighted_sum(
            rule.nodes.size(), [&](std::size_t i) { return rule.weights[i] * h(rule.nodes[i]); },
            opts.execution);
      },
      opts, "integrate_radial");
}

double integrate_radial_S(const std::function<double(double)>& h, const DerivedParams& dp,
                          const QuadratureOptions& opts, std::span<const double> y_breaks) {
  return doubling(
      [&](int m) {
        const WeightedRule rule = radial_rule_S(dp, m, y_breaks);
        return weighted_sum(
            rule.nodes.size(), [&](std::size_t i) { return rule.weights[i] * h(rule.nodes[i]); },
            opts.execution);
      },
      opts, "integrate_radial_S");
}

double integrate_radial_mu_E(const std::function<double(double)>& f, const DerivedParams& dp,
                             const QuadratureOptions& opts, std::span<const double> r_breaks, double right_shift) {
  std::vector<double> y_breaks;
  for (double r : r_breaks)
    if (r > 0.0 && std::isfinite(r)) y_breaks.push_back(y_from_radius(r, dp.alpha));
  // dr r^{alpha n - 1} = (1/alpha) (1-y^2)^{n/2-1} (1-y)^{-n} dy
  const double n = dp.n, e = n / 2.0 - 1.0;
  if (right_shift == 0.0) {
    auto h = [&](double y) { return f(radius_from_y(y, dp.alpha)) * std::pow(1.0 - y, -n); };
    return integrate_radial_S(h, dp, opts, y_breaks);
  }
  auto h = [&](double y) { return f(radius_from_y(y, dp.alpha)) * std::pow(1.0 - y, right_shift - n); };
  return integrate_radial(h, e, e - right_shift, 1.0 / dp.alpha, opts, y_breaks);
}

SphereRule make_sphere_rule(const MonomialWeight& w, int m, int singular_order) {
  const int d = w.dim();
  if (d > 3) throw UnsupportedDimension("sphere rules are implemented for d = 2 and d = 3 only");
  SphereRule rule;
  rule.dim = d;
  rule.exponents.assign(w.exponents().begin(), w.exponents().end());
  const AngleRule psi = azimuth_rule(w.exponent(0), w.exponent(1), m, singular_order);
  if (d == 2) {
    for (int i = 0; i < m; ++i) {
      rule.coords.push_back(std::cos(psi.nodes[i]));
      rule.coords.push_back(std::sin(psi.nodes[i]));
      rule.weights.push_back(psi.weights[i]);
    }
    return rule;
  }
  const double A3 = w.exponent(2);
  const double hi = A3 > 0 ? kPi / 2 : kPi;
  const double az = w.exponent(0) + w.exponent(1);
  const AngleRule chi =
      angle_rule(0.0, hi, {{true, 1.0 + az, az}, {false, A3, A3}}, m, singular_order);
  for (int i = 0; i < m; ++i) {
    const double s = std::sin(chi.nodes[i]), c = std::cos(chi.nodes[i]);
    for (int j = 0; j < m; ++j) {
      rule.coords.push_back(s * std::cos(psi.nodes[j]));
      rule.coords.push_back(s * std::sin(psi.nodes[j]));
      rule.coords.push_back(c);
      rule.weights.push_back(chi.weights[i] * psi.weights[j]);
    }
  }
  return rule;
}

double integrate_sphere(const SphereFunction& f, const MonomialWeight& w,
                        const QuadratureOptions& opts, int singular_order) {
  if (w.dim() > 3) throw UnsupportedDimension("sphere rules are implemented for d = 2 and d = 3 only");
  return doubling(
      [&](int m) {
        const SphereRule rule = make_sphere_rule(w, m, singular_order);
        return weighted_sum(
            rule.size(), [&](std::size_t i) { return rule.weights[i] * f(rule.point(i)); },
            opts.execution);
      },
      opts, "integrate_sphere");
}

double integrate_S(const WarpedFunction& F, const DerivedParams& dp, const MonomialWeight& w,
                   const QuadratureOptions& opts, int singular_order, std::span<const double> y_breaks) {
  if (w.dim() > 3) throw UnsupportedDimension("sphere rules are implemented for d = 2 and d = 3 only");
  return doubling(
      [&](int m) {
        const WeightedRule yr = radial_rule_S(dp, m, y_breaks);
        const SphereRule sr = make_sphere_rule(w, m, singular_order);
        const std::size_t ns = sr.size();
        return weighted_sum(
            yr.nodes.size() * ns,
            [&](std::size_t i) {
              const std::size_t iy = i / ns, is = i % ns;
              return yr.weights[iy] * sr.weights[is] * F(yr.nodes[iy], sr.point(is));
            },
            opts.execution);
      },
      opts, "integrate_S");
}

std::vector<double> integrate_S_vector(const WarpedVectorFunction& F, int k, const DerivedParams& dp,
                                       const MonomialWeight& w, const QuadratureOptions& opts,
                                       int singular_order, std::span<const double> y_breaks) {
  if (w.dim() > 3) throw UnsupportedDimension("sphere rules are implemented for d = 2 and d = 3 only");
  auto evaluate = [&](int m) {
    const WeightedRule yr = radial_rule_S(dp, m, y_breaks);
    const SphereRule sr = make_sphere_rule(w, m, singular_order);
    const std::size_t ns = sr.size(), count = yr.nodes.size() * ns;
    std::vector<std::vector<double>> terms = parallel::map(
        count,
        [&](std::size_t i) {
          const std::size_t iy = i / ns, is = i % ns;
          std::vector<double> out(k, 0.0);
          F(yr.nodes[iy], sr.point(is), out);
          for (double& v : out) v *= yr.weights[iy] * sr.weights[is];
          return out;
        },
        opts.execution);
    std::vector<double> sums(k), scales(k), col(count), abs_col(count);
    for (int c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < count; ++i) {
        col[i] = terms[i][c];
        abs_col[i] = std::abs(col[i]);
      }
      sums[c] = parallel::pairwise_sum(col);
      scales[c] = parallel::pairwise_sum(abs_col);
    }
    return std::pair{sums, scales};
  };
  int m = std::max(1, std::min(opts.initial_nodes, opts.max_nodes));
  auto [prev, prev_scale] = evaluate(m);
  while (2 * m <= opts.max_nodes) {
    m *= 2;
    auto [cur, scale] = evaluate(m);
    bool ok = true;
    for (int c = 0; c < k; ++c)
      if (!(std::abs(cur[c] - prev[c]) <= opts.rel_tol * std::max(scale[c], 1e-300))) ok = false;
    if (ok) return cur;
    prev = std::move(cur);
  }
  std::ostringstream os;
  os << "integrate_S_vector: node doubling did not converge by m = " << m;
  throw ConvergenceError(os.str());
}

}  // namespace ckn
