#pragma once

#include <span>
#include <vector>

#include "ckn/diffusion.hpp"
#include "ckn/jet.hpp"
#include "ckn/params.hpp"

namespace ckn {

// Stereographic chart of the monomial sphere, projecting from one pole of the
// uncharged last axis. North: z = theta'/(1 - theta_d); South: z = theta'/(1 + theta_d).
enum class Pole { North, South };

struct SpherePoint {
  Pole pole = Pole::North;
  std::vector<double> z;
};

// (S^{d-1}_*, round metric, theta^A dV). In either chart the metric is
// phi^{-2} dz^2 with phi = (1 + |z|^2)/2, and
// W_theta = |A| log phi - sum A_i log z_i.
class MonomialSphere {
 public:
  // weight_perturbation != 0 adds eps * theta_1 to W_theta in the generator
  // only, so the measure and the drift disagree (used to check detectors).
  explicit MonomialSphere(MonomialWeight weight, double weight_perturbation = 0.0);

  const MonomialWeight& weight() const { return w_; }
  int ambient_dim() const { return w_.dim(); }
  int chart_dim() const { return w_.dim() - 1; }
  double monomial_dimension() const { return w_.dim() + w_.total(); }

  // Chart with |z| <= 1 for the given unit vector.
  SpherePoint chart_point(std::span<const double> theta) const;
  // Same point, re-expressed in the other chart when |z| > 2.
  SpherePoint normalized(const SpherePoint& pt) const;
  std::vector<double> ambient(const SpherePoint& pt) const;

  // Chart variables z_j as jets, placed at slots offset..offset+d-2 of a
  // total_dim-variable jet space.
  std::vector<Jet> chart_jets(const SpherePoint& pt, int total_dim, int offset) const;
  // theta(z) as jets.
  std::vector<Jet> embedding(const std::vector<Jet>& z, Pole pole) const;
  std::vector<Jet> embedding(const SpherePoint& pt) const;

  Jet weight_potential(const std::vector<Jet>& z) const;  // W_theta
  Jet weight_potential(const SpherePoint& pt) const;
  Jet log_density(const std::vector<Jet>& z) const;  // -W_theta - (d-1) log phi

  LocalOperators at(const SpherePoint& pt) const;

  // Hessian of W_theta along grad f, from the Christoffel symbols of the
  // conformal metric (independent of the Gamma-calculus route).
  double weight_hessian(const SpherePoint& pt, const Jet& f) const;

 private:
  void check(const SpherePoint& pt) const;

  MonomialWeight w_;
  double perturbation_;
};

// (R^d_*, |x|^{2(alpha-1)} dx^2, |x|^{-bp} x^A dx).
class ModelE {
 public:
  ModelE(const CknParams& params, const DerivedParams& dp);

  int dim() const { return w_.dim(); }
  std::vector<Jet> variables(std::span<const double> x) const;
  LocalOperators at(std::span<const double> x) const;

  double log_weight(std::span<const double> x) const;  // W_E
  double metric_volume(std::span<const double> x) const;  // |x|^{d(alpha-1)}
  double density(std::span<const double> x) const;        // |x|^{-bp} x^A

 private:
  void check(std::span<const double> x) const;

  MonomialWeight w_;
  DerivedParams dp_;
  double bp_;
};

// Warped chart (y, z) of S: Gamma_S = alpha^2 (1-y^2) f_y^2 + Gamma^theta(f)/(1-y^2),
// dmu_S = (1-y^2)^{n/2-1}/alpha dy dmu_theta.
class ModelS {
 public:
  ModelS(const CknParams& params, const DerivedParams& dp, double weight_perturbation = 0.0);

  const MonomialSphere& sphere() const { return sphere_; }
  const DerivedParams& derived() const { return dp_; }
  int dim() const { return sphere_.ambient_dim(); }

  // Chart jets [y, z_1, ..., z_{d-1}].
  std::vector<Jet> chart_jets(double y, const SpherePoint& pt) const;
  // Ambient variables [y, theta_1, ..., theta_d] as jets in the chart.
  std::vector<Jet> variables(double y, const SpherePoint& pt) const;
  LocalOperators at(double y, const SpherePoint& pt) const;

 private:
  DerivedParams dp_;
  MonomialSphere sphere_;
};

}  // namespace ckn
