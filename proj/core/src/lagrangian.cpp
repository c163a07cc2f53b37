#include "subjet/lagrangian.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "subjet/quadrature.hpp"

namespace subjet {

namespace {

void check_state(const RelativisticLagrangian& L, const Vec& q, const Vec& v) {
  const auto m = static_cast<Eigen::Index>(L.dimension());
  if (q.size() != m || v.size() != m) {
    throw InvalidArgument("state dimension " + std::to_string(q.size()) + "/" + std::to_string(v.size()) +
                          " does not match Lagrangian dimension " + std::to_string(m));
  }
}

std::vector<double> stack(const Vec& a, const Vec& b) {
  std::vector<double> x(static_cast<std::size_t>(a.size() + b.size()));
  for (Eigen::Index k = 0; k < a.size(); ++k) x[static_cast<std::size_t>(k)] = a(k);
  for (Eigen::Index k = 0; k < b.size(); ++k) x[static_cast<std::size_t>(a.size() + k)] = b(k);
  return x;
}

// Generic density of the stacked variable x = (q, v).
struct DensityOf {
  const RelativisticLagrangian& L;
  std::size_t m;
  template <class T>
  T operator()(std::span<const T> x) const {
    return L.density(x.first(m), x.subspan(m, m));
  }
};

struct MetricOf {
  const SymmetricTensorField& G;
  std::size_t m;
  template <class T>
  T operator()(std::span<const T> x) const {
    return G.contract(x.first(m), x.subspan(m, m));
  }
};

}  // namespace

RelativisticLagrangian::RelativisticLagrangian(SymmetricTensorField G, OneFormField A)
    : G_(std::move(G)), A_(std::move(A)), F_(A_) {
  if (G_.dimension() != A_.dimension()) {
    throw InvalidArgument("G has dimension " + std::to_string(G_.dimension()) + " but A has " +
                          std::to_string(A_.dimension()));
  }
}

void RelativisticLagrangian::throw_non_positive(double g) {
  std::ostringstream out;
  out.precision(17);
  out << "G = " << g << " is not positive; the Lagrangian is defined only where G > 0";
  throw NonPositiveG(out.str());
}

double eval_G(const SymmetricTensorField& G, const Vec& q, const Vec& v) {
  if (q.size() != static_cast<Eigen::Index>(G.dimension()) || v.size() != q.size()) {
    throw InvalidArgument("state dimension does not match tensor field dimension");
  }
  return G.contract(as_span(q), as_span(v));
}

double eval_lagrangian(const RelativisticLagrangian& L, const TrajectoryState& s) {
  check_state(L, s.q, s.v);
  return L.density(as_span(s.q), as_span(s.v));
}

Vec variational_derivative(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel) {
  check_state(L, s.q, s.v);
  const std::size_t m = L.dimension();
  if (accel.size() != static_cast<Eigen::Index>(m)) throw InvalidArgument("acceleration dimension mismatch");
  const DensityOf f{L, m};
  const auto x = stack(s.q, s.v);
  const auto along = stack(s.v, accel);
  Vec out(m);
  for (std::size_t l = 0; l < m; ++l) {
    const double dq = ad::directional(f, x, ad::unit(2 * m, l)).derivative;
    const double dt = ad::second_directional(f, x, ad::unit(2 * m, m + l), along);
    out(static_cast<Eigen::Index>(l)) = dq - dt;
  }
  return out;
}

MetricDerivatives metric_derivatives(const SymmetricTensorField& G, const Vec& q, const Vec& v) {
  const std::size_t m = G.dimension();
  if (q.size() != static_cast<Eigen::Index>(m) || v.size() != q.size()) {
    throw InvalidArgument("state dimension does not match tensor field dimension");
  }
  const MetricOf f{G, m};
  const auto x = stack(q, v);
  const auto along = stack(v, Vec::Zero(static_cast<Eigen::Index>(m)));
  MetricDerivatives d;
  d.value = G.contract(as_span(q), as_span(v));
  d.dq.resize(m);
  d.mixed.resize(m);
  d.dvdv.resize(m, m);
  for (std::size_t b = 0; b < m; ++b) {
    const auto eb = static_cast<Eigen::Index>(b);
    d.dq(eb) = ad::directional(f, x, ad::unit(2 * m, b)).derivative;
    d.mixed(eb) = ad::second_directional(f, x, ad::unit(2 * m, m + b), along);
    for (std::size_t c = b; c < m; ++c) {
      const double h = ad::second_directional(f, x, ad::unit(2 * m, m + b), ad::unit(2 * m, m + c));
      d.dvdv(eb, static_cast<Eigen::Index>(c)) = h;
      d.dvdv(static_cast<Eigen::Index>(c), eb) = h;
    }
  }
  return d;
}

Vec eval_E(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel) {
  check_state(L, s.q, s.v);
  if (accel.size() != s.q.size()) throw InvalidArgument("acceleration dimension mismatch");
  const auto d = metric_derivatives(L.G(), s.q, s.v);
  if (!(d.value > 0.0)) {
    std::ostringstream out;
    out.precision(17);
    out << "G = " << d.value << " is not positive";
    throw NonPositiveG(out.str());
  }
  const double two_n = static_cast<double>(2 * L.half_degree());
  Vec e = (d.dq - d.mixed) / two_n - (d.dvdv / two_n) * accel;
  if (!L.field_strength().vanishes()) {
    e += std::pow(d.value, 1.0 - 1.0 / two_n) * (L.field_strength().evaluate(s.q) * s.v);
  }
  return e;
}

double noether_defect(const RelativisticLagrangian& L, const TrajectoryState& s, const Vec& accel) {
  return s.v.dot(variational_derivative(L, s, accel));
}

double defect_scale(const Vec& covector) { return 1.0 + covector.lpNorm<1>(); }

DensityDerivatives density_derivatives(const RelativisticLagrangian& L, const Vec& q, const Vec& v) {
  check_state(L, q, v);
  const std::size_t m = L.dimension();
  const DensityOf f{L, m};
  const auto x = stack(q, v);
  DensityDerivatives d;
  d.value = L.density(as_span(q), as_span(v));
  d.dq.resize(m);
  d.dv.resize(m);
  d.dvdq.resize(m, m);
  d.dvdv.resize(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    const auto el = static_cast<Eigen::Index>(l);
    d.dq(el) = ad::directional(f, x, ad::unit(2 * m, l)).derivative;
    d.dv(el) = ad::directional(f, x, ad::unit(2 * m, m + l)).derivative;
    for (std::size_t k = 0; k < m; ++k) {
      const auto ek = static_cast<Eigen::Index>(k);
      d.dvdq(el, ek) = ad::second_directional(f, x, ad::unit(2 * m, m + l), ad::unit(2 * m, k));
      if (k >= l) {
        const double h = ad::second_directional(f, x, ad::unit(2 * m, m + l), ad::unit(2 * m, m + k));
        d.dvdv(el, ek) = h;
        d.dvdv(ek, el) = h;
      }
    }
  }
  return d;
}

ParticlePath reparametrize(const ParticlePath& path, const Reparametrization& phi) {
  const auto [start, rate0] = phi.map(phi.begin);
  const auto [stop, rate1] = phi.map(phi.end);
  const double tol = 1e-12 * (1.0 + std::abs(path.begin) + std::abs(path.end));
  if (std::abs(start - path.begin) > tol || std::abs(stop - path.end) > tol) {
    throw InvalidArgument("reparametrization does not map its interval onto the path interval");
  }
  ParticlePath out;
  out.begin = phi.begin;
  out.end = phi.end;
  out.at = [path, phi](double u) {
    const auto [t, rate] = phi.map(u);
    if (rate < 0.0) throw InvalidArgument("reparametrization must be non-decreasing");
    PathSample p = path.at(t);
    p.v *= rate;
    return p;
  };
  return out;
}

double action(const RelativisticLagrangian& L, const ParticlePath& path, std::size_t panels) {
  return simpson(
      [&](double t) {
        const PathSample p = path.at(t);
        check_state(L, p.q, p.v);
        if (p.v.isZero(0.0)) return 0.0;
        return L.density(as_span(p.q), as_span(p.v));
      },
      path.begin, path.end, panels);
}

ActionPair gauge_action_invariance(const RelativisticLagrangian& L, const ParticlePath& path,
                                   const Reparametrization& phi, std::size_t panels) {
  return {action(L, path, panels), action(L, reparametrize(path, phi), panels)};
}

}  // namespace subjet
