#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ckn/parallel.hpp"
#include "ckn/params.hpp"

namespace ckn {

enum class MeasureKind { Legendre, Jacobi };

// Nodes/weights on (-1, 1) for (1-t)^beta_right (1+t)^beta_left dt.
struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  MeasureKind kind = MeasureKind::Legendre;
  double beta_left = 0.0;
  double beta_right = 0.0;

  std::size_t size() const { return nodes.size(); }
  template <class F>
  double integrate(F&& f) const {
    std::vector<double> terms(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = weights[i] * f(nodes[i]);
    return parallel::pairwise_sum(terms);
  }
};

// Golub-Welsch eigenvalues followed by Newton polishing on the orthonormal
// recurrence; weights from the Christoffel function. Throws DomainError for
// m < 1 or an exponent <= -1.
QuadratureRule1D gauss_jacobi(int m, double beta_left, double beta_right);
QuadratureRule1D gauss_legendre(int m);
// Memoized, safe to call from several threads.
const QuadratureRule1D& cached_gauss_jacobi(int m, double beta_left, double beta_right);

struct QuadratureOptions {
  int initial_nodes = 64;
  int max_nodes = 512;
  double rel_tol = 1e-10;
  Execution execution = Execution::Parallel;
};

// Rule whose weights already contain (1-y^2)^{n/2-1}/alpha, piecewise across
// the interior breakpoints y_breaks. Segments touching +-1 use Jacobi rules.
struct WeightedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
WeightedRule radial_rule_S(const DerivedParams& dp, int m, std::span<const double> y_breaks = {});
// Same layout with weight scale * (1+y)^el (1-y)^er.
WeightedRule radial_rule(double el, double er, double scale, int m, std::span<const double> y_breaks = {});

// int_{-1}^{1} h(y) scale (1+y)^el (1-y)^er dy.
double integrate_radial(const std::function<double(double)>& h, double el, double er, double scale,
                        const QuadratureOptions& opts = {}, std::span<const double> y_breaks = {});

double y_from_radius(double r, double alpha);
double radius_from_y(double y, double alpha);

// int_{-1}^{1} h(y) (1-y^2)^{n/2-1} dy / alpha.
double integrate_radial_S(const std::function<double(double)>& h, const DerivedParams& dp,
                          const QuadratureOptions& opts = {}, std::span<const double> y_breaks = {});

// int_0^inf f(r) r^{alpha n - 1} dr via y = (r^{2a}-1)/(r^{2a}+1). r_breaks are
// radii where f is not smooth (support edges). right_shift lowers the Jacobi
// exponent at y = 1 for integrands decaying like r^{-alpha n + 2 alpha shift}.
double integrate_radial_mu_E(const std::function<double(double)>& f, const DerivedParams& dp,
                             const QuadratureOptions& opts = {}, std::span<const double> r_breaks = {},
                             double right_shift = 0.0);

// Points on the monomial sphere (charged coordinates positive) with weights
// for theta^A dV. d = 2 uses the arc angle, d = 3 polar/azimuth angles; each
// angle gets a Gauss-Jacobi rule whose endpoint exponents absorb the vanishing
// weight factors. singular_order = 1 lowers the exponent at charged endpoints
// by one so integrands carrying a 1/theta_i factor stay smooth.
struct SphereRule {
  int dim = 0;
  std::vector<double> coords;  // size() * dim, row major
  std::vector<double> weights;
  std::vector<double> exponents;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * dim, dim);
  }
};
SphereRule make_sphere_rule(const MonomialWeight& w, int m, int singular_order = 0);

using SphereFunction = std::function<double(std::span<const double> theta)>;
using WarpedFunction = std::function<double(double y, std::span<const double> theta)>;

double integrate_sphere(const SphereFunction& f, const MonomialWeight& w,
                        const QuadratureOptions& opts = {}, int singular_order = 0);

// int F dmu_S with dmu_S = (1-y^2)^{n/2-1}/alpha dy theta^A dV.
double integrate_S(const WarpedFunction& F, const DerivedParams& dp, const MonomialWeight& w,
                   const QuadratureOptions& opts = {}, int singular_order = 0,
                   std::span<const double> y_breaks = {});

// Several integrals over the same tensor rule; F writes k values into out.
// Converged when every component passes the doubling test.
using WarpedVectorFunction = std::function<void(double y, std::span<const double> theta, std::span<double> out)>;
std::vector<double> integrate_S_vector(const WarpedVectorFunction& F, int k, const DerivedParams& dp,
                                       const MonomialWeight& w, const QuadratureOptions& opts = {},
                                       int singular_order = 0, std::span<const double> y_breaks = {});

}  // namespace ckn
