#pragma once

// Chart-local reduced picture: trajectories as sections q^i(q^0) with
// three-velocities q^i_0, the reduced Lagrangian
//   Lbar = (Gbar^{1/2N} + q^i_0 A_i + A_0) dq^0,   Gbar = G(q, (1, q^i_0)),
// and the lift back to four-velocities on G = 1.

#include <cstddef>
#include <vector>

#include "subjet/lagrangian.hpp"

namespace subjet {

struct ReducedState {
  double q0 = 0.0;
  Vec qi;  // m - 1 fiber coordinates
  Vec vi;  // m - 1 three-velocities dq^i/dq^0

  Vec point() const;     // (q0, qi)
  Vec velocity() const;  // (1, vi)
};

/// Gbar = G(q, (1, v)); equals (q^0_tau)^{-2N} G for any representative.
double reduce_G(const SymmetricTensorField& G, const ReducedState& s);

/// Gbar^{1/2N} + v^i A_i + A_0. Throws NonPositiveReducedG when Gbar <= 0
/// (state outside this chart's validity).
double reduced_lagrangian(const RelativisticLagrangian& L, const ReducedState& s);

/// Solves the reduced Lagrange equations Ebar_i = 0 for d2q^i/d(q^0)^2.
Vec reduced_acceleration(const RelativisticLagrangian& L, const ReducedState& s);

/// (Ebar_0, Ebar_1, ..., Ebar_{m-1}) at a reduced state and acceleration.
/// Ebar_i is the variational derivative of the reduced Lagrangian; Ebar_0 is
/// the q^0 component of the full variational derivative in the tau = q^0
/// parametrization, so Ebar_0 + v^i Ebar_i = 0 checks the two routes.
Vec reduced_euler_lagrange(const RelativisticLagrangian& L, const ReducedState& s, const Vec& accel);

/// One RK4 step of (q^i, q^i_0) in the chart time q^0 with signed step h.
ReducedState reduced_rk4_step(const RelativisticLagrangian& L, const ReducedState& s, double h);

struct ReducedTrajectory {
  std::vector<ReducedState> states;
  double step = 0.0;

  /// q^i at an arbitrary q^0 inside the sampled range by cubic Hermite
  /// interpolation on (q^i, q^i_0).
  Vec position_at(double q0) const;
};

/// Fixed-step RK4 of the reduced equations over q^0 in [s.q0, s.q0 + span].
ReducedTrajectory integrate_reduced(const RelativisticLagrangian& L, const ReducedState& initial, double step,
                                    double span);

/// dtau/dq^0 = Gbar^{1/2N} on the branch q^0_tau > 0.
double proper_time_rate(const RelativisticLagrangian& L, const ReducedState& s);

/// Cumulative tau(q^0) = tau0 + sign * int Gbar^{1/2N} dq^0 on the solver grid
/// (composite Simpson).
std::vector<double> reconstruct_tau(const RelativisticLagrangian& L, const ReducedTrajectory& path, int sign = +1,
                                    double tau0 = 0.0);

/// Four-velocity of a reduced state on the constraint G = 1:
///   q^0_tau = sign * Gbar^{-1/2N},  q^i_tau = q^0_tau q^i_0.
Vec lift_velocity(const RelativisticLagrangian& L, const ReducedState& s, int sign = +1);

/// Chart projection q^i_0 = q^i_tau / q^0_tau of a four-velocity state.
ReducedState project_state(const TrajectoryState& s);

}  // namespace subjet
