#pragma once

// Integration of the relativistic equation E_b = 0 on the constraint surface
// G = 1 with a fixed-step classical Runge-Kutta scheme.

#include <cstddef>
#include <vector>

#include "subjet/jet_charts.hpp"
#include "subjet/lagrangian.hpp"

namespace subjet {

struct IntegratorConfig {
  double step = 1e-3;
  double t_end = 1.0;
  /// Rescale q_tau by G^{-1/2N} after every step.
  bool projection = false;
  /// Abort once |G - 1| exceeds this.
  double drift_abort = 1e-6;

  void validate() const;
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  std::vector<double> constraint;  // G at each sample

  double max_drift() const;
};

/// W_{bm} = (2N-1) G_{b m a3..a2N} v^a3 .. v^a2N, the coefficient of the
/// acceleration in -E_b. Equals G_{bm}(q) for N = 1.
Mat mass_matrix(const RelativisticLagrangian& L, const TrajectoryState& s);

/// The unique q_tautau with E_b = 0. Throws SingularMassMatrix when W is
/// numerically singular and NonPositiveG off the domain.
Vec acceleration(const RelativisticLagrangian& L, const TrajectoryState& s);

/// sign * v / G^{1/2N}, which lies on G = 1.
Vec normalize_velocity(const RelativisticLagrangian& L, const Vec& q, const Vec& v, int sign = +1);

/// One classical RK4 step of (q, q_tau) with signed step h.
TrajectoryState rk4_step(const RelativisticLagrangian& L, const TrajectoryState& s, double h);

/// Fixed-step RK4 flow from `initial` over [tau0, tau0 + t_end], sampled at
/// every step. `initial` must satisfy |G - 1| <= 1e-12.
Trajectory integrate(const RelativisticLagrangian& L, const TrajectoryState& initial, const IntegratorConfig& cfg);

/// Projection of a four-velocity state to the chart (q^0; q^i, q^i_0).
SubmanifoldJet to_three_velocity(const TrajectoryState& s);

}  // namespace subjet
