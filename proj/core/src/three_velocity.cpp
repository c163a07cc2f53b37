#include "subjet/three_velocity.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subjet/jet_charts.hpp"
#include "subjet/quadrature.hpp"

namespace subjet {

namespace {

void check_reduced(const RelativisticLagrangian& L, const ReducedState& s) {
  const auto k = static_cast<Eigen::Index>(L.dimension()) - 1;
  if (s.qi.size() != k || s.vi.size() != k) {
    throw InvalidArgument("reduced state needs " + std::to_string(k) + " fiber coordinates and velocities");
  }
}

[[noreturn]] void throw_reduced(double gbar) {
  std::ostringstream out;
  out.precision(17);
  out << "Gbar = " << gbar << " is not positive; the state lies outside this chart's domain";
  throw NonPositiveReducedG(out.str());
}

// Reduced density over x = (q^0, q^i, q^i_0).
struct ReducedDensity {
  const RelativisticLagrangian& L;
  std::size_t m;
  template <class T>
  T operator()(std::span<const T> x) const {
    std::vector<T> v(m);
    v[0] = T(1.0);
    for (std::size_t i = 1; i < m; ++i) v[i] = x[m + i - 1];
    const std::span<const T> vs(v);
    const T gbar = L.G().contract(x.first(m), vs);
    if (!(ad::primal(gbar) > 0.0)) throw_reduced(ad::primal(gbar));
    return L.density(x.first(m), vs);
  }
};

std::vector<double> stacked(const ReducedState& s) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(1 + 2 * s.qi.size()));
  x.push_back(s.q0);
  for (Eigen::Index i = 0; i < s.qi.size(); ++i) x.push_back(s.qi(i));
  for (Eigen::Index i = 0; i < s.vi.size(); ++i) x.push_back(s.vi(i));
  return x;
}

// Direction (1, v, a) of the total derivative d_0 in the stacked variables.
std::vector<double> total_direction(const ReducedState& s, const Vec& accel) {
  std::vector<double> d;
  d.push_back(1.0);
  for (Eigen::Index i = 0; i < s.vi.size(); ++i) d.push_back(s.vi(i));
  for (Eigen::Index i = 0; i < accel.size(); ++i) d.push_back(accel(i));
  return d;
}

}  // namespace

Vec ReducedState::point() const {
  Vec p(qi.size() + 1);
  p(0) = q0;
  p.tail(qi.size()) = qi;
  return p;
}

Vec ReducedState::velocity() const {
  Vec v(vi.size() + 1);
  v(0) = 1.0;
  v.tail(vi.size()) = vi;
  return v;
}

double reduce_G(const SymmetricTensorField& G, const ReducedState& s) {
  return eval_G(G, s.point(), s.velocity());
}

double reduced_lagrangian(const RelativisticLagrangian& L, const ReducedState& s) {
  check_reduced(L, s);
  const double gbar = reduce_G(L.G(), s);
  if (!(gbar > 0.0)) throw_reduced(gbar);
  const Vec q = s.point();
  const Vec v = s.velocity();
  return L.density(as_span(q), as_span(v));
}

Vec reduced_acceleration(const RelativisticLagrangian& L, const ReducedState& s) {
  check_reduced(L, s);
  const std::size_t m = L.dimension();
  const std::size_t k = m - 1;
  const std::size_t n = 2 * m - 1;
  const ReducedDensity f{L, m};
  const auto x = stacked(s);
  const auto along = total_direction(s, Vec::Zero(static_cast<Eigen::Index>(k)));
  Mat hess(k, k);
  Vec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto ei = static_cast<Eigen::Index>(i);
    const auto vi = ad::unit(n, m + i);
    rhs(ei) = ad::directional(f, x, ad::unit(n, 1 + i)).derivative - ad::second_directional(f, x, vi, along);
    for (std::size_t j = i; j < k; ++j) {
      const double h = ad::second_directional(f, x, vi, ad::unit(n, m + j));
      hess(ei, static_cast<Eigen::Index>(j)) = h;
      hess(static_cast<Eigen::Index>(j), ei) = h;
    }
  }
  Eigen::PartialPivLU<Mat> lu(hess);
  const double rcond = detail::reciprocal_condition(hess, lu);
  if (!(rcond >= 1.0 / kMaxCondition)) {
    std::ostringstream out;
    out << "reduced velocity Hessian is singular (rcond=" << rcond << ")";
    throw SingularReducedHessian(out.str());
  }
  return lu.solve(rhs);
}

Vec reduced_euler_lagrange(const RelativisticLagrangian& L, const ReducedState& s, const Vec& accel) {
  check_reduced(L, s);
  const std::size_t m = L.dimension();
  const std::size_t n = 2 * m - 1;
  if (accel.size() != static_cast<Eigen::Index>(m - 1)) throw InvalidArgument("reduced acceleration has wrong size");
  const ReducedDensity f{L, m};
  const auto x = stacked(s);
  const auto along = total_direction(s, accel);
  Vec e(m);
  for (std::size_t i = 1; i < m; ++i) {
    e(static_cast<Eigen::Index>(i)) = ad::directional(f, x, ad::unit(n, i)).derivative -
                                      ad::second_directional(f, x, ad::unit(n, m + i - 1), along);
  }
  Vec full_accel(m);
  full_accel(0) = 0.0;
  full_accel.tail(m - 1) = accel;
  e(0) = variational_derivative(L, TrajectoryState{s.q0, s.point(), s.velocity()}, full_accel)(0);
  return e;
}

ReducedState reduced_rk4_step(const RelativisticLagrangian& L, const ReducedState& s, double h) {
  auto accel = [&](double q0, const Vec& q, const Vec& v) { return reduced_acceleration(L, ReducedState{q0, q, v}); };
  const Vec k1q = s.vi;
  const Vec k1v = accel(s.q0, s.qi, s.vi);
  const Vec k2q = s.vi + 0.5 * h * k1v;
  const Vec k2v = accel(s.q0 + 0.5 * h, s.qi + 0.5 * h * k1q, k2q);
  const Vec k3q = s.vi + 0.5 * h * k2v;
  const Vec k3v = accel(s.q0 + 0.5 * h, s.qi + 0.5 * h * k2q, k3q);
  const Vec k4q = s.vi + h * k3v;
  const Vec k4v = accel(s.q0 + h, s.qi + h * k3q, k4q);
  ReducedState out;
  out.q0 = s.q0 + h;
  out.qi = s.qi + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  out.vi = s.vi + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

ReducedTrajectory integrate_reduced(const RelativisticLagrangian& L, const ReducedState& initial, double step,
                                    double span) {
  check_reduced(L, initial);
  if (!(step > 0.0) || !(span > 0.0)) throw InvalidArgument("reduced integration needs positive step and span");
  const auto steps = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  ReducedTrajectory traj;
  traj.step = step;
  traj.states.reserve(steps + 1);
  traj.states.push_back(initial);
  ReducedState cur = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      cur = reduced_rk4_step(L, cur, step);
    } catch (Error& e) {
      e.annotate_tau(cur.q0);
      throw;
    }
    cur.q0 = initial.q0 + static_cast<double>(k) * step;
    traj.states.push_back(cur);
  }
  return traj;
}

Vec ReducedTrajectory::position_at(double q0) const {
  if (states.empty()) throw InvalidArgument("empty reduced trajectory");
  if (states.size() == 1) return states.front().qi;
  const double x0 = states.front().q0;
  const double tol = 1e-9 * step;
  if (q0 < x0 - tol || q0 > states.back().q0 + tol) throw DomainError("q0 outside the sampled range");
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor((q0 - x0) / step)));
  k = std::min(k, states.size() - 2);
  const auto& a = states[k];
  const auto& b = states[k + 1];
  const double h = b.q0 - a.q0;
  const double t = (q0 - a.q0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * a.qi + h10 * h * a.vi + h01 * b.qi + h11 * h * b.vi;
}

double proper_time_rate(const RelativisticLagrangian& L, const ReducedState& s) {
  check_reduced(L, s);
  const double gbar = reduce_G(L.G(), s);
  if (!(gbar > 0.0)) throw_reduced(gbar);
  return std::pow(gbar, 1.0 / static_cast<double>(2 * L.half_degree()));
}

std::vector<double> reconstruct_tau(const RelativisticLagrangian& L, const ReducedTrajectory& path, int sign,
                                    double tau0) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const std::size_t n = path.states.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double h = path.states[k].q0 - path.states[k - 1].q0;
    if (std::abs(h - path.step) > 1e-9 * std::abs(path.step)) {
      throw InvalidArgument("reconstruct_tau needs samples on a uniform q0 grid");
    }
  }
  std::vector<double> rate(n);
  for (std::size_t k = 0; k < n; ++k) rate[k] = proper_time_rate(L, path.states[k]);
  auto tau = cumulative_simpson(rate, path.step);
  for (double& t : tau) t = tau0 + static_cast<double>(sign) * t;
  return tau;
}

Vec lift_velocity(const RelativisticLagrangian& L, const ReducedState& s, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const double rate = proper_time_rate(L, s);
  const double v0 = static_cast<double>(sign) / rate;
  Vec v = s.velocity();
  return v0 * v;
}

ReducedState project_state(const TrajectoryState& s) {
  const auto m = static_cast<std::size_t>(s.q.size());
  SectionJet jet{Vec::Constant(1, s.tau), s.q, s.v};
  const auto sub = section_to_submanifold(jet, ChartPartition::leading(m, 1));
  return ReducedState{s.q(0), s.q.tail(s.q.size() - 1), sub.slopes.col(0)};
}

}  // namespace subjet
