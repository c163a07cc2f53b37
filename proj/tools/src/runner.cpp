#include "subjet_app/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "subjet/nambu_goto.hpp"
#include "subjet/sampling.hpp"

namespace subjet::app {

namespace {

using nlohmann::ordered_json;

// Streams reserved for the random fields, well away from per-sample indices.
constexpr std::uint64_t kFieldStreamBase = std::uint64_t{1} << 40;

[[noreturn]] void fail(const std::string& where, const Error& e) { throw RunError(where + ": " + e.what()); }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output.csv", "cannot write '" + path + "'");
  return out;
}

std::string csv_path(const Scenario& s, const RunOptions& o) { return o.out_path.empty() ? s.csv_path : o.out_path; }

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << format_number(row[i]);
  }
  out << '\n';
}

ordered_json vec_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json mat_json(const Mat& m) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

TrajectoryState initial_state(const Scenario& s) {
  const auto& L = *s.lagrangian;
  const auto& init = *s.initial;
  try {
    return TrajectoryState{init.tau, init.q, normalize_velocity(L, init.q, init.v, init.sign)};
  } catch (const Error& e) {
    fail("initial.v", e);
  }
}

Trajectory run_integrator(const Scenario& s) {
  try {
    return integrate(*s.lagrangian, initial_state(s), *s.integrator);
  } catch (const Error& e) {
    fail("integrator", e);
  }
}

Report simulate(const Scenario& s, const RunOptions& o, double tol) {
  const std::string path = csv_path(s, o);
  if (path.empty()) throw ConfigError("output.csv", "simulate needs an output file (--out or output.csv)");
  const Trajectory traj = run_integrator(s);

  auto out = open_output(path);
  const std::size_t m = s.dimension;
  out << "tau";
  for (std::size_t k = 0; k < m; ++k) out << ",q" << k;
  for (std::size_t k = 0; k < m; ++k) out << ",v" << k;
  out << ",G\n";
  std::vector<double> row;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& st = traj.states[i];
    row.assign(1, st.tau);
    row.insert(row.end(), st.q.data(), st.q.data() + st.q.size());
    row.insert(row.end(), st.v.data(), st.v.data() + st.v.size());
    row.push_back(traj.constraint[i]);
    write_row(out, row);
  }
  if (!out) throw ConfigError("output.csv", "failed writing '" + path + "'");

  Report r;
  r.max_defect = traj.max_drift();
  r.samples = traj.states.size();
  r.pass = r.max_defect <= tol;
  r.details["csv"] = path;
  r.details["final_tau"] = traj.states.back().tau;
  r.details["final_q"] = vec_json(traj.states.back().q);
  return r;
}

Report check_noether(const Scenario& s, std::uint64_t seed, double tol) {
  const auto& base = *s.lagrangian;
  const auto& cfg = s.noether;
  std::vector<RelativisticLagrangian> fields;
  for (std::size_t f = 0; f < cfg.fields; ++f) {
    SampleStream rng(seed, kFieldStreamBase + f);
    fields.emplace_back(random_tensor_field(rng, base.G(), cfg.perturbation, cfg.max_degree),
                        [&] {
                          // Perturb A on top of the configured one.
                          const auto extra = random_one_form(rng, s.dimension, cfg.one_form_scale, cfg.max_degree);
                          std::vector<Polynomial> comps;
                          for (std::size_t mu = 0; mu < s.dimension; ++mu) comps.push_back(base.A()[mu] + extra[mu]);
                          return OneFormField(std::move(comps));
                        }());
  }

  double worst = 0.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < s.samples; ++i) {
    const auto& L = fields[i % fields.size()];
    try {
      SampleStream rng(seed, i);
      const StateBox box;
      const auto st = random_state(rng, L, box);
      const Vec a = rng.uniform_vector(s.dimension, box.a_lo, box.a_hi);
      const Vec e = variational_derivative(L, st, a);
      const double d = std::abs(st.v.dot(e)) / defect_scale(e);
      if (d > worst || !std::isfinite(d)) {
        worst = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
        worst_index = i;
      }
    } catch (const Error& e) {
      fail("samples: sample " + std::to_string(i), e);
    }
  }
  Report r;
  r.max_defect = worst;
  r.samples = s.samples;
  r.pass = worst <= tol;
  r.details["N"] = s.N;
  r.details["fields"] = cfg.fields;
  r.details["worst_sample"] = worst_index;
  return r;
}

// Cubic Hermite interpolation of an integrated trajectory in tau.
ParticlePath hermite_path(const Trajectory& traj) {
  ParticlePath p;
  p.begin = traj.states.front().tau;
  p.end = traj.states.back().tau;
  p.at = [states = traj.states](double t) {
    const double t0 = states.front().tau;
    const double h = states[1].tau - t0;
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor((t - t0) / h)));
    k = std::min(k, states.size() - 2);
    const auto& a = states[k];
    const auto& b = states[k + 1];
    const double dt = b.tau - a.tau;
    const double x = (t - a.tau) / dt;
    const double x2 = x * x, x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x, h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
    const double d00 = (6 * x2 - 6 * x) / dt, d10 = 3 * x2 - 4 * x + 1, d01 = (-6 * x2 + 6 * x) / dt, d11 = 3 * x2 - 2 * x;
    PathSample s;
    s.q = h00 * a.q + h10 * dt * a.v + h01 * b.q + h11 * dt * b.v;
    s.v = d00 * a.q + d10 * a.v + d01 * b.q + d11 * b.v;
    return s;
  };
  return p;
}

Reparametrization make_reparam(const GaugeSettings& g, double begin, double end) {
  Reparametrization phi;
  phi.begin = begin;
  phi.end = end;
  const double len = end - begin;
  const double p = g.parameter;
  switch (g.reparam) {
    case GaugeSettings::Reparam::Identity:
      phi.map = [](double u) { return std::pair{u, 1.0}; };
      break;
    case GaugeSettings::Reparam::Power:
      phi.map = [=](double u) {
        const double x = (u - begin) / len;
        return std::pair{begin + len * std::pow(x, p), p * std::pow(x, p - 1.0)};
      };
      break;
    case GaugeSettings::Reparam::Exp: {
      const double denom = std::expm1(p);
      phi.map = [=](double u) {
        const double x = (u - begin) / len;
        return std::pair{begin + len * std::expm1(p * x) / denom, p * std::exp(p * x) / denom};
      };
      break;
    }
  }
  return phi;
}

Report check_gauge(const Scenario& s, double tol) {
  const auto& L = *s.lagrangian;
  const auto& g = *s.gauge;
  ParticlePath path;
  if (g.path == GaugeSettings::Path::Linear) {
    path.begin = g.begin;
    path.end = g.end;
    path.at = [q0 = g.q0, v = g.velocity](double u) { return PathSample{q0 + u * v, v}; };
  } else {
    const Trajectory traj = run_integrator(s);
    if (traj.states.size() < 2) throw ConfigError("integrator.t_end", "integrated path needs at least two samples");
    path = hermite_path(traj);
  }
  ActionPair pair;
  try {
    pair = gauge_action_invariance(L, path, make_reparam(g, path.begin, path.end), g.panels);
  } catch (const Error& e) {
    fail("path", e);
  }
  Report r;
  r.max_defect = std::abs(pair.after - pair.before);
  r.samples = g.panels + 1;
  r.pass = r.max_defect <= tol;
  r.details["action"] = pair.before;
  r.details["reparametrized_action"] = pair.after;
  r.details["panels"] = g.panels;
  return r;
}

Report transform(const Scenario& s, double tol) {
  const auto& t = *s.transform;
  const SubmanifoldJet image = [&] {
    try {
      return transform_jet(t.jet, t.transition);
    } catch (const Error& e) {
      fail("transition", e);
    }
  }();
  Report r;
  r.samples = 1;
  r.details["description"] = t.transition.description();
  r.details["point"] = vec_json(image.point);
  r.details["slopes"] = mat_json(image.slopes);
  if (const auto inv = t.transition.inverse()) {
    const SubmanifoldJet back = [&] {
      try {
        return transform_jet(image, *inv);
      } catch (const Error& e) {
        fail("transition (inverse)", e);
      }
    }();
    r.max_defect = std::max((back.point - t.jet.point).lpNorm<Eigen::Infinity>(),
                            (back.slopes - t.jet.slopes).lpNorm<Eigen::Infinity>());
    r.details["round_trip"] = true;
  } else {
    r.details["round_trip"] = false;
  }
  r.pass = r.max_defect <= tol;
  return r;
}

Report reduce(const Scenario& s, const RunOptions& o, double tol) {
  const auto& L = *s.lagrangian;
  const auto& cfg = *s.integrator;
  ReducedState init;
  double tau0 = 0.0;
  int sign = +1;
  if (s.reduced) {
    init = *s.reduced;
  } else {
    const auto st = initial_state(s);
    try {
      init = project_state(st);
    } catch (const Error& e) {
      fail("initial.v", e);
    }
    tau0 = st.tau;
    sign = s.initial->sign;
  }
  ReducedTrajectory path;
  std::vector<double> tau;
  try {
    path = integrate_reduced(L, init, cfg.step, cfg.t_end);
    tau = reconstruct_tau(L, path, sign, tau0);
  } catch (const Error& e) {
    fail("integrator", e);
  }

  double worst = 0.0;
  std::vector<double> gbar(path.states.size());
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const auto& st = path.states[k];
    try {
      gbar[k] = reduce_G(L.G(), st);
      const Vec v = lift_velocity(L, st, sign);
      const Vec e = reduced_euler_lagrange(L, st, reduced_acceleration(L, st));
      const double identity = std::abs(e(0) + st.vi.dot(e.tail(e.size() - 1))) / defect_scale(e);
      worst = std::max({worst, std::abs(eval_G(L.G(), st.point(), v) - 1.0), identity});
    } catch (const Error& e) {
      fail("integrator: sample " + std::to_string(k) + " (q0=" + format_number(st.q0) + ")", e);
    }
  }

  const std::string out_path = csv_path(s, o);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    const std::size_t m = s.dimension;
    out << "q0";
    for (std::size_t k = 1; k < m; ++k) out << ",q" << k;
    for (std::size_t k = 1; k < m; ++k) out << ",v" << k;
    out << ",Gbar,tau_reconstructed\n";
    std::vector<double> row;
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      const auto& st = path.states[k];
      row.assign(1, st.q0);
      row.insert(row.end(), st.qi.data(), st.qi.data() + st.qi.size());
      row.insert(row.end(), st.vi.data(), st.vi.data() + st.vi.size());
      row.push_back(gbar[k]);
      row.push_back(tau[k]);
      write_row(out, row);
    }
    if (!out) throw ConfigError("output.csv", "failed writing '" + out_path + "'");
  }

  Report r;
  r.max_defect = worst;
  r.samples = path.states.size();
  r.pass = worst <= tol;
  if (!out_path.empty()) r.details["csv"] = out_path;
  r.details["final_q0"] = path.states.back().q0;
  r.details["final_tau"] = tau.back();
  return r;
}

Report string_check(const Scenario& s, std::uint64_t seed, double tol) {
  const auto& cfg = *s.string;
  const FlatTargetMetric eta(cfg.eta, cfg.signature_factor);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.samples; ++i) {
    try {
      SampleStream rng(seed, i);
      const auto j = random_worldsheet_jet(rng, eta, cfg.min_det);
      const Vec e = ng_variational_derivative(eta, j);
      const double scale = defect_scale(e);
      worst = std::max({worst, std::abs(j.first.col(0).dot(e)) / scale, std::abs(j.first.col(1).dot(e)) / scale});
    } catch (const Error& e) {
      fail("samples: sample " + std::to_string(i), e);
    }
  }
  Report r;
  r.max_defect = worst;
  r.samples = s.samples;
  r.pass = worst <= tol;

  if (cfg.action) {
    const auto m = static_cast<Eigen::Index>(s.dimension);
    WorldsheetPatch sheet;
    if (cfg.sheet == "flat") {
      sheet.tangent = [m](double, double) {
        Mat t = Mat::Zero(m, 2);
        t(0, 0) = 1.0;
        t(1, 1) = 1.0;
        return t;
      };
    } else {
      // Unit cylinder (v, cos u, sin u): the axis runs along coordinate 0, so
      // the sheet is timelike for a mostly-minus eta.
      sheet.tangent = [m](double u, double) {
        Mat t = Mat::Zero(m, 2);
        t(1, 0) = -std::sin(u);
        t(2, 0) = std::cos(u);
        t(0, 1) = 1.0;
        return t;
      };
    }
    RectangleDiffeo diffeo;
    if (cfg.diffeo == "identity") {
      diffeo.map = [](double u, double v) { return std::pair{Eigen::Vector2d(u, v), Eigen::Matrix2d::Identity().eval()}; };
    } else if (cfg.diffeo == "square") {
      diffeo.map = [](double u, double v) {
        Eigen::Matrix2d jac;
        jac << 2 * u, 0, 0, 1;
        return std::pair{Eigen::Vector2d(u * u, v), jac};
      };
    } else {
      diffeo.map = [](double u, double v) {
        constexpr double k = 0.1, pi = std::numbers::pi;
        Eigen::Matrix2d jac;
        jac << 1 + k * pi * std::cos(pi * u) * std::sin(pi * v), k * pi * std::sin(pi * u) * std::cos(pi * v), 0, 1;
        return std::pair{Eigen::Vector2d(u + k * std::sin(pi * u) * std::sin(pi * v), v), jac};
      };
    }
    SheetActionPair pair;
    try {
      pair = ng_action_invariance(eta, sheet, diffeo, cfg.panels);
    } catch (const Error& e) {
      fail("action", e);
    }
    const double diff = std::abs(pair.after - pair.before);
    r.details["action"] = pair.before;
    r.details["reparametrized_action"] = pair.after;
    r.details["action_defect"] = diff;
    r.details["action_pass"] = diff <= cfg.action_tolerance;
    r.pass = r.pass && diff <= cfg.action_tolerance;
  }
  return r;
}

void write_json(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        out += ordered_json(it.key()).dump();
        out += ": ";
        write_json(it.value(), out);
      }
      out += '}';
      break;
    }
    case ordered_json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        write_json(j[i], out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::number_float:
      out += format_number(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Report run(const Scenario& s, const RunOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = o.seed.value_or(s.seed);
  auto tol = [&](double fallback) { return o.tolerance.value_or(s.tolerance.value_or(fallback)); };

  Report r;
  switch (s.kind) {
    case Kind::Simulate: r = simulate(s, o, tol(s.integrator->drift_abort)); break;
    case Kind::CheckNoether: r = check_noether(s, seed, tol(1e-9)); break;
    case Kind::CheckGauge: r = check_gauge(s, tol(1e-6)); break;
    case Kind::Transform: r = transform(s, tol(1e-12)); break;
    case Kind::Reduce: r = reduce(s, o, tol(1e-10)); break;
    case Kind::StringCheck: r = string_check(s, seed, tol(1e-9)); break;
  }
  r.kind = kind_name(s.kind);
  r.seed = seed;
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.runtime_ms = o.no_timing ? 0.0 : elapsed;
  return r;
}

std::string format_report(const Report& r) {
  ordered_json j;
  j["kind"] = r.kind;
  j["pass"] = r.pass;
  j["max_defect"] = r.max_defect;
  j["samples"] = r.samples;
  j["runtime_ms"] = r.runtime_ms;
  j["seed"] = r.seed;
  if (!r.details.empty()) j["details"] = r.details;
  std::string out;
  write_json(j, out);
  return out;
}

}  // namespace subjet::app
