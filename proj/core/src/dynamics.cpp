#include "subjet/dynamics.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subjet {

void IntegratorConfig::validate() const {
  if (!(step > 0.0)) throw InvalidArgument("integrator step must be positive");
  if (!(t_end > 0.0)) throw InvalidArgument("integrator t_end must be positive");
  if (!(drift_abort > 0.0)) throw InvalidArgument("integrator drift_abort must be positive");
}

double Trajectory::max_drift() const {
  double d = 0.0;
  for (double g : constraint) d = std::max(d, std::abs(g - 1.0));
  return d;
}

Mat mass_matrix(const RelativisticLagrangian& L, const TrajectoryState& s) {
  const auto d = metric_derivatives(L.G(), s.q, s.v);
  return d.dvdv / static_cast<double>(2 * L.half_degree());
}

Vec acceleration(const RelativisticLagrangian& L, const TrajectoryState& s) {
  const auto d = metric_derivatives(L.G(), s.q, s.v);
  if (!(d.value > 0.0)) {
    std::ostringstream out;
    out.precision(17);
    out << "G = " << d.value << " is not positive";
    throw NonPositiveG(out.str());
  }
  const double two_n = static_cast<double>(2 * L.half_degree());
  const Mat w = d.dvdv / two_n;
  Vec rhs = (d.dq - d.mixed) / two_n;
  if (!L.field_strength().vanishes()) {
    rhs += std::pow(d.value, 1.0 - 1.0 / two_n) * (L.field_strength().evaluate(s.q) * s.v);
  }
  Eigen::PartialPivLU<Mat> lu(w);
  const double rcond = detail::reciprocal_condition(w, lu);
  if (!(rcond >= 1.0 / kMaxCondition)) {
    std::ostringstream out;
    out << "mass matrix is singular (rcond=" << rcond << ")";
    throw SingularMassMatrix(out.str());
  }
  return lu.solve(rhs);
}

Vec normalize_velocity(const RelativisticLagrangian& L, const Vec& q, const Vec& v, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const double g = eval_G(L.G(), q, v);
  if (!(g > 0.0)) {
    std::ostringstream out;
    out.precision(17);
    out << "cannot normalize: G = " << g << " is not positive";
    throw NonPositiveG(out.str());
  }
  const double scale = std::pow(g, -1.0 / static_cast<double>(2 * L.half_degree()));
  return static_cast<double>(sign) * scale * v;
}

TrajectoryState rk4_step(const RelativisticLagrangian& L, const TrajectoryState& s, double h) {
  auto accel = [&](const Vec& q, const Vec& v) { return acceleration(L, TrajectoryState{0.0, q, v}); };
  const Vec k1q = s.v;
  const Vec k1v = accel(s.q, s.v);
  const Vec k2q = s.v + 0.5 * h * k1v;
  const Vec k2v = accel(s.q + 0.5 * h * k1q, k2q);
  const Vec k3q = s.v + 0.5 * h * k2v;
  const Vec k3v = accel(s.q + 0.5 * h * k2q, k3q);
  const Vec k4q = s.v + h * k3v;
  const Vec k4v = accel(s.q + h * k3q, k4q);
  TrajectoryState out;
  out.tau = s.tau + h;
  out.q = s.q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  out.v = s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

Trajectory integrate(const RelativisticLagrangian& L, const TrajectoryState& initial, const IntegratorConfig& cfg) {
  cfg.validate();
  const double g0 = eval_G(L.G(), initial.q, initial.v);
  if (!(std::abs(g0 - 1.0) <= 1e-12)) {
    std::ostringstream out;
    out.precision(17);
    out << "initial state is off the constraint surface (G = " << g0 << "); normalize the velocity first";
    throw InvalidArgument(out.str());
  }
  const auto steps = static_cast<std::size_t>(std::floor(cfg.t_end / cfg.step + 1e-9));
  Trajectory traj;
  traj.states.reserve(steps + 1);
  traj.constraint.reserve(steps + 1);
  traj.states.push_back(initial);
  traj.constraint.push_back(g0);

  TrajectoryState cur = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      cur = rk4_step(L, cur, cfg.step);
      cur.tau = initial.tau + static_cast<double>(k) * cfg.step;
      if (cfg.projection) cur.v = normalize_velocity(L, cur.q, cur.v, +1);
    } catch (Error& e) {
      e.annotate_tau(cur.tau);
      throw;
    }
    const double g = eval_G(L.G(), cur.q, cur.v);
    if (!(std::abs(g - 1.0) <= cfg.drift_abort)) {
      std::ostringstream out;
      out.precision(17);
      out << "constraint drift |G - 1| = " << std::abs(g - 1.0) << " exceeds " << cfg.drift_abort;
      DriftExceeded err(out.str());
      err.annotate_tau(cur.tau);
      throw err;
    }
    traj.states.push_back(cur);
    traj.constraint.push_back(g);
  }
  return traj;
}

SubmanifoldJet to_three_velocity(const TrajectoryState& s) {
  const auto m = static_cast<std::size_t>(s.q.size());
  SectionJet jet{Vec::Constant(1, s.tau), s.q, s.v};
  return section_to_submanifold(jet, ChartPartition::leading(m, 1));
}

}  // namespace subjet
