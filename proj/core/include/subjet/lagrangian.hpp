#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "subjet/autodiff.hpp"
#include "subjet/errors.hpp"
#include "subjet/tensor_field.hpp"

namespace subjet {

/// Point (tau, q, q_tau) of the first jet manifold of R x Q -> R.
struct TrajectoryState {
  double tau = 0.0;
  Vec q;
  Vec v;  // four-velocity q_tau
};

/// Gauge-invariant relativistic Lagrangian  L = G^{1/2N} + q_tau^mu A_mu,
/// with G the 2N-fold contraction of a symmetric tensor field with q_tau.
class RelativisticLagrangian {
 public:
  RelativisticLagrangian(SymmetricTensorField G, OneFormField A);

  const SymmetricTensorField& G() const { return G_; }
  const OneFormField& A() const { return A_; }
  const FieldStrength& field_strength() const { return F_; }
  std::size_t dimension() const { return G_.dimension(); }
  std::size_t half_degree() const { return G_.half_degree(); }

  template <class T>
  T metric_value(std::span<const T> q, std::span<const T> v) const {
    return G_.contract(q, v);
  }

  /// The density G^{1/2N} + v.A over any (dual) scalar type.
  /// Throws NonPositiveG off the Lagrangian's domain G > 0.
  template <class T>
  T density(std::span<const T> q, std::span<const T> v) const {
    using ad::pow;
    using std::pow;
    T g = G_.contract(q, v);
    if (!(ad::primal(g) > 0.0)) throw_non_positive(ad::primal(g));
    return pow(g, 1.0 / static_cast<double>(2 * half_degree())) + A_.pair(q, v);
  }

 private:
  [[noreturn]] static void throw_non_positive(double g);

  SymmetricTensorField G_;
  OneFormField A_;
  FieldStrength F_;
};

/// G(q, v): full 2N-fold contraction; negative values are returned as is.
double eval_G(const SymmetricTensorField& G, const Vec& q, const Vec& v);

double eval_lagrangian(const RelativisticLagrangian& L, const TrajectoryState& s);

/// Euler-Lagrange covector  E_l = d_l L - d_tau (dL/dv^l), with the total
/// derivative expanded along (q_tau, q_tautau) by nested dual numbers.
Vec variational_derivative(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel);

/// Relativistic-equation covector
///   E_b = (d_b G_{m a2..}/2N - d_m G_{b a2..}) v^m v^a2.. - (2N-1) G_{b m a3..} a^m v^a3..
///         + G^{1-1/2N} F_{bm} v^m.
Vec eval_E(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel);

/// q_tau^l E_l; zero for every state and acceleration by reparametrization
/// invariance.
double noether_defect(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel);

/// 1 + |E|_1, the scale against which identity defects are measured.
double defect_scale(const Vec& covector);

/// Partial derivatives of the density at (q, v), all by forward-mode AD.
struct DensityDerivatives {
  double value = 0.0;
  Vec dq;    // dL/dq^l
  Vec dv;    // dL/dv^l
  Mat dvdq;  // (l, m): d2L / dv^l dq^m
  Mat dvdv;  // (l, m): d2L / dv^l dv^m
};
DensityDerivatives density_derivatives(const RelativisticLagrangian& L, const Vec& q, const Vec& v);

/// Derivatives of G entering the relativistic equation.
struct MetricDerivatives {
  double value = 0.0;
  Vec dq;     // d_b G
  Vec mixed;  // v^m d_m (dG/dv^b)
  Mat dvdv;   // d2G / dv^b dv^m = 2N (2N-1) G_{b m a3..} v^a3..
};
MetricDerivatives metric_derivatives(const SymmetricTensorField& G, const Vec& q, const Vec& v);

/// A parametrized particle path with its velocity, defined on [begin, end].
struct PathSample {
  Vec q;
  Vec v;
};
struct ParticlePath {
  std::function<PathSample(double)> at;
  double begin = 0.0;
  double end = 1.0;
};

/// Monotone parameter change u -> phi(u) on [begin, end]; map returns
/// (phi(u), phi'(u)).
struct Reparametrization {
  std::function<std::pair<double, double>(double)> map;
  double begin = 0.0;
  double end = 1.0;
};

/// s o phi with velocity v(phi(u)) phi'(u).
ParticlePath reparametrize(const ParticlePath& path, const Reparametrization& phi);

/// Action integral of L along the path by composite Simpson quadrature.
/// Nodes where the velocity is exactly zero contribute zero (the continuous
/// extension of a degree-1 homogeneous density); any other node with G <= 0
/// raises NonPositiveG.
double action(const RelativisticLagrangian& L, const ParticlePath& path, std::size_t panels);

struct ActionPair {
  double before = 0.0;
  double after = 0.0;
};

/// Actions of a path and of its reparametrization.
ActionPair gauge_action_invariance(const RelativisticLagrangian& L, const ParticlePath& path,
                                   const Reparametrization& phi, std::size_t panels);

}  // namespace subjet
