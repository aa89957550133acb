#include "ckn/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ckn/errors.hpp"
#include "ckn/models.hpp"
#include "ckn/parallel.hpp"
#include "ckn/special.hpp"

namespace ckn {

namespace {

using Matrix = Eigen::MatrixXd;

// Exponent vectors of all monomials in d variables with lo <= degree <= hi.
std::vector<std::vector<int>> monomials(int d, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(d, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == d - 1) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  for (int deg = lo; deg <= hi; ++deg) rec(rec, 0, deg);
  return out;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Smallest eigenvalue of K v = lambda G v after dropping near-null Gram directions.
double smallest_generalized(const Matrix& G, const Matrix& K, double cutoff) {
  const Eigen::Index N = G.rows();
  Eigen::VectorXd s(N);
  for (Eigen::Index i = 0; i < N; ++i) s(i) = G(i, i) > 0.0 ? 1.0 / std::sqrt(G(i, i)) : 0.0;
  const Matrix Gs = s.asDiagonal() * G * s.asDiagonal();
  const Matrix Ks = s.asDiagonal() * K * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> ge(Gs);
  const Eigen::VectorXd& ev = ge.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) throw DomainError("Rayleigh-Ritz: Gram matrix is numerically zero");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < N; ++i)
    if (ev(i) > cutoff * top) keep.push_back(i);
  if (keep.empty()) throw DomainError("Rayleigh-Ritz: ill-conditioned Gram matrix");
  Matrix T(N, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    T.col(static_cast<Eigen::Index>(c)) = ge.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
  const Matrix R = T.transpose() * Ks * T;
  Eigen::SelfAdjointEigenSolver<Matrix> ke(0.5 * (R + R.transpose()), Eigen::EigenvaluesOnly);
  return ke.eigenvalues().minCoeff();
}

struct SphereMatrices {
  Matrix M, K;            // int u_a u_b, int Gamma(u_a, u_b) over mu_theta
  Eigen::VectorXd mean;   // int u_a
};

SphereMatrices sphere_matrices(const MonomialWeight& w, const std::vector<std::vector<int>>& basis, int nodes) {
  const SphereRule rule = make_sphere_rule(w, nodes);
  const int d = w.dim();
  const Eigen::Index P = static_cast<Eigen::Index>(rule.size()), N = static_cast<Eigen::Index>(basis.size());
  Matrix V(P, N);
  std::vector<Matrix> T(d, Matrix(P, N));
  Eigen::VectorXd wt(P);
  for (Eigen::Index i = 0; i < P; ++i) {
    const auto th = rule.point(static_cast<std::size_t>(i));
    wt(i) = rule.weights[static_cast<std::size_t>(i)];
    for (Eigen::Index a = 0; a < N; ++a) {
      const auto& e = basis[static_cast<std::size_t>(a)];
      double v = 1.0;
      for (int j = 0; j < d; ++j) v *= ipow(th[j], e[j]);
      std::vector<double> g(d, 0.0);
      double radial = 0.0;
      for (int j = 0; j < d; ++j) {
        if (e[j] == 0) continue;
        double gj = e[j] * ipow(th[j], e[j] - 1);
        for (int k = 0; k < d; ++k)
          if (k != j) gj *= ipow(th[k], e[k]);
        g[j] = gj;
        radial += th[j] * gj;
      }
      V(i, a) = v;
      for (int j = 0; j < d; ++j) T[j](i, a) = g[j] - radial * th[j];
    }
  }
  SphereMatrices out;
  out.M = V.transpose() * wt.asDiagonal() * V;
  out.K = Matrix::Zero(N, N);
  for (int j = 0; j < d; ++j) out.K += T[j].transpose() * wt.asDiagonal() * T[j];
  out.mean = V.transpose() * wt;
  return out;
}

}  // namespace

double sphere_first_eigenvalue(const MonomialWeight& w, int degree, const SpectralOptions& opts) {
  if (degree < 1) throw DomainError("sphere_first_eigenvalue needs degree >= 1");
  const auto basis = monomials(w.dim(), 0, degree);
  const SphereMatrices S = sphere_matrices(w, basis, opts.nodes);
  const double Z = S.mean(0);  // basis[0] is the constant
  const Eigen::Index N = S.M.rows() - 1;
  const Matrix G = S.M.bottomRightCorner(N, N) - S.mean.tail(N) * S.mean.tail(N).transpose() / Z;
  return smallest_generalized(G, S.K.bottomRightCorner(N, N), opts.gram_cutoff);
}

double radial_spectral_gap_S(const DerivedParams& dp, int degree, const SpectralOptions& opts) {
  if (degree < 1) throw DomainError("radial_spectral_gap_S needs degree >= 1");
  const WeightedRule rule = radial_rule_S(dp, opts.nodes);
  const double a2 = dp.fs_lhs;
  Matrix G = Matrix::Zero(degree, degree), K = Matrix::Zero(degree, degree);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(degree);
  double Z = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i], w = rule.weights[i];
    Z += w;
    for (int a = 1; a <= degree; ++a) {
      mean(a - 1) += w * ipow(y, a);
      for (int b = 1; b <= degree; ++b) {
        G(a - 1, b - 1) += w * ipow(y, a + b);
        K(a - 1, b - 1) += w * a2 * (1.0 - y * y) * a * b * ipow(y, a + b - 2);
      }
    }
  }
  G -= mean * mean.transpose() / Z;
  return smallest_generalized(G, K, opts.gram_cutoff);
}

double spectral_gap_S(const CknParams& params, const DerivedParams& dp, int degree, const SpectralOptions& opts) {
  if (degree < 1) throw DomainError("spectral_gap_S needs degree >= 1");
  const auto th_basis = monomials(params.weight.dim(), 0, degree);
  const SphereMatrices S = sphere_matrices(params.weight, th_basis, opts.nodes);
  const double e = dp.n / 2.0 - 1.0, a2 = dp.fs_lhs;
  const WeightedRule ry = radial_rule(e, e, 1.0 / dp.alpha, opts.nodes);
  // angular part of Gamma_S carries 1/(1-y^2)
  const WeightedRule rb = radial_rule(e - 1.0, e - 1.0, 1.0 / dp.alpha, opts.nodes);
  const int J = degree + 1;
  Matrix Gy = Matrix::Zero(J, J), Ay = Matrix::Zero(J, J), By = Matrix::Zero(J, J);
  Eigen::VectorXd my = Eigen::VectorXd::Zero(J);
  for (std::size_t i = 0; i < ry.nodes.size(); ++i) {
    const double y = ry.nodes[i], w = ry.weights[i];
    for (int a = 0; a < J; ++a) {
      my(a) += w * ipow(y, a);
      for (int b = 0; b < J; ++b) {
        Gy(a, b) += w * ipow(y, a + b);
        if (a > 0 && b > 0) Ay(a, b) += w * a2 * (1.0 - y * y) * a * b * ipow(y, a + b - 2);
      }
    }
  }
  for (std::size_t i = 0; i < rb.nodes.size(); ++i)
    for (int a = 0; a < J; ++a)
      for (int b = 0; b < J; ++b) By(a, b) += rb.weights[i] * ipow(rb.nodes[i], a + b);

  struct Index {
    int j;
    Eigen::Index k;
  };
  std::vector<Index> idx;
  for (int j = 0; j < J; ++j)
    for (std::size_t k = 0; k < th_basis.size(); ++k) {
      int deg = j;
      for (int e_ : th_basis[k]) deg += e_;
      if (deg >= 1 && deg <= degree) idx.push_back({j, static_cast<Eigen::Index>(k)});
    }
  const Eigen::Index N = static_cast<Eigen::Index>(idx.size());
  const double Z = my(0) * S.mean(0);
  Matrix G(N, N), K(N, N);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) {
      const Index& u = idx[static_cast<std::size_t>(a)];
      const Index& v = idx[static_cast<std::size_t>(b)];
      const double ca = my(u.j) * S.mean(u.k), cb = my(v.j) * S.mean(v.k);
      G(a, b) = Gy(u.j, v.j) * S.M(u.k, v.k) - ca * cb / Z;
      K(a, b) = Ay(u.j, v.j) * S.M(u.k, v.k) + By(u.j, v.j) * S.K(u.k, v.k);
    }
  return smallest_generalized(G, K, opts.gram_cutoff);
}

double stability_threshold(const DerivedParams& dp) { return dp.fs_lhs * dp.n; }

double nonradial_test_quotient_closed(const DerivedParams& dp, double lambda_theta) {
  return (dp.fs_lhs + (dp.n + 1.0) * lambda_theta) / dp.n;
}

TestQuotient nonradial_test_quotient(const CknParams& params, const DerivedParams& dp, double lambda_theta,
                                     const QuadratureOptions& opts) {
  const ModelS model(params, dp);
  const MonomialSphere& sphere = model.sphere();
  auto integrand = [&](double y, std::span<const double> theta, std::span<double> out) {
    const SpherePoint pt = sphere.chart_point(theta);
    const std::vector<Jet> v = model.variables(y, pt);
    const Jet g = sqrt(1.0 - v[0] * v[0]) * v.back();
    out[0] = model.at(y, pt).gamma(g);
    out[1] = g.value() * g.value();
  };
  const auto I = integrate_S_vector(integrand, 2, dp, params.weight, opts);
  return {I[0] / I[1], nonradial_test_quotient_closed(dp, lambda_theta)};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::NeutralThreshold: return "NeutralThreshold";
    case Verdict::Unstable: return "Unstable";
  }
  return "?";
}

double verdict_tolerance(double threshold) { return 1e-6 * std::max(1.0, std::abs(threshold)); }

Verdict classify(double quotient, double threshold) {
  const double tol = verdict_tolerance(threshold);
  if (quotient < threshold - tol) return Verdict::Unstable;
  if (quotient > threshold + tol) return Verdict::Stable;
  return Verdict::NeutralThreshold;
}

bool agrees(Verdict v, Regime r) {
  switch (r) {
    case Regime::Symmetric: return v == Verdict::Stable;
    case Regime::Threshold: return v == Verdict::NeutralThreshold;
    case Regime::Breaking: return v == Verdict::Unstable;
  }
  return false;
}

BreakingVerdict symmetry_breaking_detector(const CknParams& params, int degree, const SpectralOptions& opts,
                                           std::optional<double> lambda_theta_1) {
  const DerivedParams dp = derive(params);
  BreakingVerdict out;
  out.lambda_theta_1 = lambda_theta_1 ? *lambda_theta_1 : sphere_first_eigenvalue(params.weight, degree, opts);
  out.threshold = stability_threshold(dp);
  out.test_quotient = nonradial_test_quotient_closed(dp, out.lambda_theta_1);
  out.verdict = classify(out.test_quotient, out.threshold);
  out.agrees_with_fs = agrees(out.verdict, dp.regime);
  return out;
}

std::vector<ScanRow> phase_scan(const MonomialWeight& w, const ScanGrid& grid, int degree,
                                const SpectralOptions& opts, const QuadratureOptions& quad) {
  if (grid.steps_a < 1 || grid.steps_b < 1) throw DomainError("phase_scan needs at least one step per axis");
  const double lambda = sphere_first_eigenvalue(w, degree, opts);
  auto at = [](double lo, double hi, int steps, int i) {
    return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  };
  const std::size_t count = static_cast<std::size_t>(grid.steps_a) * static_cast<std::size_t>(grid.steps_b);
  QuadratureOptions row_quad = quad;
  row_quad.execution = Execution::Serial;
  SpectralOptions row_opts = opts;
  row_opts.execution = Execution::Serial;
  return parallel::map(
      count,
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx / static_cast<std::size_t>(grid.steps_b));
        const int j = static_cast<int>(idx % static_cast<std::size_t>(grid.steps_b));
        ScanRow row;
        row.a = at(grid.a_min, grid.a_max, grid.steps_a, i);
        row.b = row.a + at(grid.delta_min, grid.delta_max, grid.steps_b, j);
        const CknParams p{w, row.a, row.b};
        try {
          row.dp = derive(p);
        } catch (const DomainError& e) {
          row.skip_reason = e.what();
          return row;
        }
        row.valid = true;
        row.verdict = symmetry_breaking_detector(p, degree, row_opts, lambda);
        if (w.last_uncharged() && w.dim() <= 3)
          row.quotient_quadrature = nonradial_test_quotient(p, row.dp, lambda, row_quad).quadrature;
        return row;
      },
      quad.execution);
}

}  // namespace ckn
