#include "ckn/models.hpp"

#include <cmath>

#include "ckn/errors.hpp"

namespace ckn {

namespace {

Jet half_one_plus_sq(const std::vector<Jet>& z, int dim) {
  Jet r2(dim, 0.0);
  for (const Jet& zj : z) r2 += zj * zj;
  return 0.5 * (r2 + 1.0);
}

}  // namespace

MonomialSphere::MonomialSphere(MonomialWeight weight, double weight_perturbation)
    : w_(std::move(weight)), perturbation_(weight_perturbation) {
  if (!w_.last_uncharged())
    throw DomainError("monomial sphere chart needs A_d = 0 (projection along the uncharged axis)");
  if (chart_dim() > kMaxJetDim - 1) throw UnsupportedDimension("monomial sphere charts support d <= 4");
}

void MonomialSphere::check(const SpherePoint& pt) const {
  if (static_cast<int>(pt.z.size()) != chart_dim()) throw ChartError("sphere chart point has wrong dimension");
  for (int i = 0; i < chart_dim(); ++i)
    if (w_.charged(i) && !(pt.z[i] > 0.0)) throw ChartError("charged chart coordinate must be positive");
}

SpherePoint MonomialSphere::chart_point(std::span<const double> theta) const {
  const int d = ambient_dim();
  SpherePoint pt;
  const double td = theta[d - 1];
  pt.pole = td <= 0.0 ? Pole::North : Pole::South;
  const double denom = pt.pole == Pole::North ? 1.0 - td : 1.0 + td;
  pt.z.resize(d - 1);
  for (int i = 0; i < d - 1; ++i) pt.z[i] = theta[i] / denom;
  return pt;
}

SpherePoint MonomialSphere::normalized(const SpherePoint& pt) const {
  double r2 = 0;
  for (double v : pt.z) r2 += v * v;
  if (r2 <= 4.0) return pt;
  const std::vector<double> th = ambient(pt);
  return chart_point(th);
}

std::vector<double> MonomialSphere::ambient(const SpherePoint& pt) const {
  const int d = ambient_dim();
  double r2 = 0;
  for (double v : pt.z) r2 += v * v;
  const double phi = 0.5 * (1.0 + r2);
  std::vector<double> th(d);
  for (int i = 0; i < d - 1; ++i) th[i] = pt.z[i] / phi;
  const double s = (r2 - 1.0) / (r2 + 1.0);
  th[d - 1] = pt.pole == Pole::North ? s : -s;
  return th;
}

std::vector<Jet> MonomialSphere::chart_jets(const SpherePoint& pt, int total_dim, int offset) const {
  check(pt);
  std::vector<Jet> z;
  for (int j = 0; j < chart_dim(); ++j) z.push_back(Jet::variable(total_dim, offset + j, pt.z[j]));
  return z;
}

std::vector<Jet> MonomialSphere::embedding(const std::vector<Jet>& z, Pole pole) const {
  const int dim = z.empty() ? 0 : z[0].dim();
  const Jet phi = half_one_plus_sq(z, dim);
  const Jet inv = 1.0 / phi;
  std::vector<Jet> th;
  for (const Jet& zj : z) th.push_back(zj * inv);
  // (r2 - 1)/(r2 + 1) = 1 - 1/phi
  Jet last = 1.0 - inv;
  th.push_back(pole == Pole::North ? last : -last);
  return th;
}

std::vector<Jet> MonomialSphere::embedding(const SpherePoint& pt) const {
  return embedding(chart_jets(pt, chart_dim(), 0), pt.pole);
}

Jet MonomialSphere::weight_potential(const std::vector<Jet>& z) const {
  const int dim = z.empty() ? 0 : z[0].dim();
  const Jet logphi = log(half_one_plus_sq(z, dim));
  Jet W = w_.total() * logphi;
  if (perturbation_ != 0.0) W += perturbation_ * z[0] / half_one_plus_sq(z, dim);
  for (int i = 0; i < chart_dim(); ++i)
    if (w_.charged(i)) W -= w_.exponent(i) * log(z[i]);
  return W;
}

Jet MonomialSphere::weight_potential(const SpherePoint& pt) const {
  return weight_potential(chart_jets(pt, chart_dim(), 0));
}

Jet MonomialSphere::log_density(const std::vector<Jet>& z) const {
  const int dim = z.empty() ? 0 : z[0].dim();
  return -weight_potential(z) - (ambient_dim() - 1.0) * log(half_one_plus_sq(z, dim));
}

LocalOperators MonomialSphere::at(const SpherePoint& pt) const {
  const std::vector<Jet> z = chart_jets(pt, chart_dim(), 0);
  const Jet phi = half_one_plus_sq(z, chart_dim());
  std::array<Jet, kMaxJetDim> a;
  for (int j = 0; j < chart_dim(); ++j) a[j] = phi * phi;
  return LocalOperators(pt.z, a, log_density(z));
}

double MonomialSphere::weight_hessian(const SpherePoint& pt, const Jet& f) const {
  const int m = chart_dim();
  const Jet W = weight_potential(pt);
  double r2 = 0;
  for (double v : pt.z) r2 += v * v;
  const double phi = 0.5 * (1.0 + r2);
  // g = e^{2 sigma} dz^2, sigma = -log phi, sigma_i = -z_i/phi
  double hWff = 0, sf = 0, Wf = 0, ff = 0, sW = 0;
  for (int i = 0; i < m; ++i) {
    const double si = -pt.z[i] / phi;
    sf += si * f.grad(i);
    Wf += W.grad(i) * f.grad(i);
    ff += f.grad(i) * f.grad(i);
    sW += si * W.grad(i);
    for (int j = 0; j < m; ++j) hWff += W.hess(i, j) * f.grad(i) * f.grad(j);
  }
  const double phi4 = phi * phi * phi * phi;
  return phi4 * (hWff - 2.0 * sf * Wf + ff * sW);
}

ModelE::ModelE(const CknParams& params, const DerivedParams& dp)
    : w_(params.weight), dp_(dp), bp_(params.b * dp.p) {
  if (w_.dim() > kMaxJetDim) throw UnsupportedDimension("Euclidean model supports d <= 4");
}

void ModelE::check(std::span<const double> x) const {
  double r2 = 0;
  for (int i = 0; i < dim(); ++i) {
    r2 += x[i] * x[i];
    if (w_.charged(i) && !(x[i] > 0.0)) throw ChartError("charged coordinate must be positive");
  }
  if (!(r2 > 0.0)) throw ChartError("the origin is excluded");
}

std::vector<Jet> ModelE::variables(std::span<const double> x) const {
  check(x);
  std::vector<Jet> v;
  for (int i = 0; i < dim(); ++i) v.push_back(Jet::variable(dim(), i, x[i]));
  return v;
}

LocalOperators ModelE::at(std::span<const double> x) const {
  const std::vector<Jet> v = variables(x);
  Jet r2(dim(), 0.0);
  for (const Jet& xi : v) r2 += xi * xi;
  const Jet logr2 = log(r2);
  const Jet a = exp((1.0 - dp_.alpha) * logr2);
  Jet P = (-bp_ / 2.0) * logr2;
  for (int i = 0; i < dim(); ++i)
    if (w_.charged(i)) P += w_.exponent(i) * log(v[i]);
  std::array<Jet, kMaxJetDim> am;
  for (int i = 0; i < dim(); ++i) am[i] = a;
  return LocalOperators(std::vector<double>(x.begin(), x.begin() + dim()), am, P);
}

double ModelE::log_weight(std::span<const double> x) const {
  check(x);
  double r2 = 0, logxA = 0;
  for (int i = 0; i < dim(); ++i) {
    r2 += x[i] * x[i];
    if (w_.charged(i)) logxA += w_.exponent(i) * std::log(x[i]);
  }
  return -logxA - 0.5 * (dp_.alpha * (dp_.n - dim()) - w_.total()) * std::log(r2);
}

double ModelE::metric_volume(std::span<const double> x) const {
  double r2 = 0;
  for (int i = 0; i < dim(); ++i) r2 += x[i] * x[i];
  return std::pow(r2, 0.5 * dim() * (dp_.alpha - 1.0));
}

double ModelE::density(std::span<const double> x) const {
  check(x);
  double r2 = 0, xA = 1;
  for (int i = 0; i < dim(); ++i) {
    r2 += x[i] * x[i];
    if (w_.charged(i)) xA *= std::pow(x[i], w_.exponent(i));
  }
  return std::pow(r2, -bp_ / 2.0) * xA;
}

ModelS::ModelS(const CknParams& params, const DerivedParams& dp, double weight_perturbation)
    : dp_(dp), sphere_(params.weight, weight_perturbation) {}

std::vector<Jet> ModelS::chart_jets(double y, const SpherePoint& pt) const {
  if (!(std::abs(y) < 1.0)) throw ChartError("warped chart needs |y| < 1");
  std::vector<Jet> v{Jet::variable(dim(), 0, y)};
  for (Jet& z : sphere_.chart_jets(pt, dim(), 1)) v.push_back(std::move(z));
  return v;
}

std::vector<Jet> ModelS::variables(double y, const SpherePoint& pt) const {
  const std::vector<Jet> c = chart_jets(y, pt);
  std::vector<Jet> z(c.begin() + 1, c.end());
  std::vector<Jet> v{c[0]};
  for (Jet& t : sphere_.embedding(z, pt.pole)) v.push_back(std::move(t));
  return v;
}

LocalOperators ModelS::at(double y, const SpherePoint& pt) const {
  const std::vector<Jet> c = chart_jets(y, pt);
  const std::vector<Jet> z(c.begin() + 1, c.end());
  const Jet w = 1.0 - c[0] * c[0];  // 1 - y^2
  Jet r2(dim(), 0.0);
  for (const Jet& zj : z) r2 += zj * zj;
  const Jet phi = 0.5 * (r2 + 1.0);
  std::array<Jet, kMaxJetDim> a;
  a[0] = (dp_.alpha * dp_.alpha) * w;
  const Jet az = phi * phi / w;
  for (int j = 1; j < dim(); ++j) a[j] = az;
  const Jet P = (dp_.n / 2.0 - 1.0) * log(w) + sphere_.log_density(z);
  std::vector<double> point{y};
  point.insert(point.end(), pt.z.begin(), pt.z.end());
  return LocalOperators(point, a, P);
}

}  // namespace ckn
