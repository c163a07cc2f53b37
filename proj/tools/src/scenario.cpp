#include "subjet_app/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace subjet::app {

namespace {

using nlohmann::json;

/// A JSON value together with its path from the document root.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *value_; }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

  Node at(const std::string& key) const {
    require_object();
    auto it = value_->find(key);
    if (it == value_->end()) throw ConfigError(child_path(key), "missing required field");
    return Node(*it, child_path(key));
  }

  std::optional<Node> find(const std::string& key) const {
    require_object();
    auto it = value_->find(key);
    if (it == value_->end()) return std::nullopt;
    return Node(*it, child_path(key));
  }

  Node operator[](std::size_t i) const { return Node((*value_)[i], path_ + "[" + std::to_string(i) + "]"); }

  void require_object() const {
    if (!value_->is_object()) fail("expected an object");
  }

  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = value_->begin(); it != value_->end(); ++it) {
      if (!allowed.count(it.key())) throw ConfigError(child_path(it.key()), "unknown field");
    }
  }

  std::size_t size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double x = value_->get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }

  std::uint64_t unsigned_integer() const {
    if (!value_->is_number_integer() || (value_->is_number_integer() && !value_->is_number_unsigned() &&
                                         value_->get<std::int64_t>() < 0)) {
      fail("expected a non-negative integer");
    }
    return value_->get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
  }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  int sign() const {
    if (!value_->is_number_integer()) fail("expected +1 or -1");
    const auto s = value_->get<std::int64_t>();
    if (s != 1 && s != -1) fail("expected +1 or -1");
    return static_cast<int>(s);
  }

  Vec vector(std::optional<std::size_t> expected = {}) const {
    const std::size_t n = size();
    if (expected && n != *expected) fail("expected " + std::to_string(*expected) + " entries, got " + std::to_string(n));
    Vec v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].number();
    return v;
  }

  Mat matrix(std::size_t rows, std::size_t cols) const {
    if (size() != rows) fail("expected " + std::to_string(rows) + " rows");
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) m.row(static_cast<Eigen::Index>(r)) = (*this)[r].vector(cols).transpose();
    return m;
  }

  std::vector<std::size_t> indices(std::size_t bound) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto k = (*this)[i].unsigned_integer();
      if (k >= bound) (*this)[i].fail("index must be below " + std::to_string(bound));
      out.push_back(static_cast<std::size_t>(k));
    }
    return out;
  }

 private:
  const json* value_;
  std::string path_;
};

Kind parse_kind(const Node& n) {
  const std::string s = n.string();
  for (Kind k : {Kind::Simulate, Kind::CheckNoether, Kind::CheckGauge, Kind::Transform, Kind::Reduce, Kind::StringCheck}) {
    if (kind_name(k) == s) return k;
  }
  n.fail("unknown kind '" + s + "'");
}

// [{"coefficient": c, "exponents": [...]}, ...]
Polynomial parse_polynomial(const Node& n, std::size_t m) {
  Polynomial p(m);
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node term = n[i];
    term.allow_keys({"coefficient", "exponents"});
    const Node e = term.at("exponents");
    if (e.size() != m) e.fail("expected " + std::to_string(m) + " exponents");
    Polynomial::Exponents exps;
    for (std::size_t k = 0; k < m; ++k) exps.push_back(static_cast<unsigned>(e[k].unsigned_integer()));
    p.add_term(term.at("coefficient").number(), exps);
  }
  return p;
}

SymmetricTensorField catalog_G(const Node& n, const std::string& name, std::size_t m, std::size_t N) {
  SymmetricTensorField g = [&] {
    if (name == "minkowski") return catalog::minkowski(m);
    if (name == "euclidean") return catalog::euclidean(m);
    if (name == "quartic-eta2") return catalog::quartic_eta2(m);
    n.fail("unknown catalog entry '" + name + "' (expected minkowski, euclidean or quartic-eta2)");
  }();
  if (g.half_degree() != N) {
    n.fail("catalog entry '" + name + "' has degree " + std::to_string(g.degree()) + " but N = " + std::to_string(N) +
           " requires degree " + std::to_string(2 * N));
  }
  return g;
}

SymmetricTensorField parse_G(const Node& n, std::size_t m, std::size_t N) {
  if (n.raw().is_string()) return catalog_G(n, n.string(), m, N);
  n.allow_keys({"catalog", "terms"});
  if (n.has("catalog") == n.has("terms")) n.fail("give exactly one of 'catalog' or 'terms'");
  if (auto c = n.find("catalog")) return catalog_G(*c, c->string(), m, N);
  SymmetricTensorField g(m, 2 * N);
  const Node terms = n.at("terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Node t = terms[i];
    t.allow_keys({"indices", "value", "polynomial"});
    const Node idx = t.at("indices");
    if (idx.size() != 2 * N) idx.fail("expected " + std::to_string(2 * N) + " indices");
    const auto indices = idx.indices(m);
    if (t.has("value") == t.has("polynomial")) t.fail("give exactly one of 'value' or 'polynomial'");
    if (auto v = t.find("value")) {
      g.add(indices, Polynomial::constant(m, v->number()));
    } else {
      g.add(indices, parse_polynomial(t.at("polynomial"), m));
    }
  }
  return g;
}

OneFormField parse_A(const Node& n, std::size_t m) {
  n.require_object();
  const std::string type = n.at("type").string();
  if (type == "zero") {
    n.allow_keys({"type"});
    return catalog::zero_form(m);
  }
  if (type == "constant") {
    n.allow_keys({"type", "components"});
    return catalog::constant_form(n.at("components").vector(m));
  }
  if (type == "linear") {
    n.allow_keys({"type", "offset", "slope"});
    return catalog::linear_form(n.at("offset").vector(m), n.at("slope").matrix(m, m));
  }
  if (type == "uniform_field") {
    n.allow_keys({"type", "F"});
    const Node f = n.at("F");
    const Mat F = f.matrix(m, m);
    if (!(F + F.transpose()).isZero(0.0)) f.fail("field strength must be antisymmetric");
    return catalog::uniform_field(F);
  }
  if (type == "polynomial") {
    n.allow_keys({"type", "components"});
    const Node c = n.at("components");
    if (c.size() != m) c.fail("expected " + std::to_string(m) + " components");
    std::vector<Polynomial> comps;
    for (std::size_t k = 0; k < m; ++k) comps.push_back(parse_polynomial(c[k], m));
    return OneFormField(std::move(comps));
  }
  n.at("type").fail("unknown one-form type '" + type + "' (expected zero, constant, linear, uniform_field or polynomial)");
}

InitialState parse_initial(const Node& n, std::size_t m) {
  n.allow_keys({"tau", "q", "v", "sign"});
  InitialState s;
  if (auto t = n.find("tau")) s.tau = t->number();
  s.q = n.at("q").vector(m);
  s.v = n.at("v").vector(m);
  if (auto sg = n.find("sign")) s.sign = sg->sign();
  return s;
}

ReducedState parse_reduced(const Node& n, std::size_t m) {
  n.allow_keys({"q0", "qi", "vi"});
  ReducedState s;
  s.q0 = n.find("q0") ? n.at("q0").number() : 0.0;
  s.qi = n.at("qi").vector(m - 1);
  s.vi = n.at("vi").vector(m - 1);
  return s;
}

IntegratorConfig parse_integrator(const Node& n) {
  n.allow_keys({"step", "t_end", "projection", "drift_abort"});
  IntegratorConfig cfg;
  cfg.step = n.at("step").positive();
  cfg.t_end = n.at("t_end").positive();
  if (auto p = n.find("projection")) cfg.projection = p->boolean();
  if (auto d = n.find("drift_abort")) cfg.drift_abort = d->positive();
  return cfg;
}

std::size_t even_panels(const Node& n) {
  const auto p = n.unsigned_integer();
  if (p == 0 || p % 2 != 0) n.fail("panel count must be a positive even integer");
  return static_cast<std::size_t>(p);
}

NoetherSettings parse_noether(const Node& n) {
  n.allow_keys({"fields", "perturbation", "one_form_scale", "max_degree"});
  NoetherSettings s;
  if (auto f = n.find("fields")) {
    s.fields = static_cast<std::size_t>(f->unsigned_integer());
    if (s.fields == 0) f->fail("need at least one random field");
  }
  if (auto p = n.find("perturbation")) {
    s.perturbation = p->number();
    if (s.perturbation < 0) p->fail("must be non-negative");
  }
  if (auto p = n.find("one_form_scale")) {
    s.one_form_scale = p->number();
    if (s.one_form_scale < 0) p->fail("must be non-negative");
  }
  if (auto d = n.find("max_degree")) s.max_degree = static_cast<unsigned>(d->unsigned_integer());
  return s;
}

GaugeSettings parse_gauge(const Node& root, std::size_t m) {
  GaugeSettings g;
  const Node path = root.at("path");
  const std::string type = path.at("type").string();
  if (type == "linear") {
    path.allow_keys({"type", "q0", "velocity", "begin", "end"});
    g.path = GaugeSettings::Path::Linear;
    g.q0 = path.at("q0").vector(m);
    g.velocity = path.at("velocity").vector(m);
    if (auto b = path.find("begin")) g.begin = b->number();
    if (auto e = path.find("end")) g.end = e->number();
    if (!(g.end > g.begin)) path.fail("path needs end > begin");
  } else if (type == "integrated") {
    path.allow_keys({"type"});
    g.path = GaugeSettings::Path::Integrated;
  } else {
    path.at("type").fail("unknown path type '" + type + "' (expected linear or integrated)");
  }
  if (auto r = root.find("reparametrization")) {
    const std::string rt = r->at("type").string();
    if (rt == "identity") {
      r->allow_keys({"type"});
      g.reparam = GaugeSettings::Reparam::Identity;
    } else if (rt == "power") {
      r->allow_keys({"type", "exponent"});
      g.reparam = GaugeSettings::Reparam::Power;
      g.parameter = 2.0;
      if (auto e = r->find("exponent")) {
        g.parameter = e->number();
        if (g.parameter < 1.0) e->fail("exponent must be at least 1 so the map stays differentiable at the start");
      }
    } else if (rt == "exp") {
      r->allow_keys({"type", "rate"});
      g.reparam = GaugeSettings::Reparam::Exp;
      g.parameter = r->find("rate") ? r->at("rate").number() : 1.0;
      if (g.parameter == 0.0) r->at("rate").fail("rate must be non-zero");
    } else {
      r->at("type").fail("unknown reparametrization '" + rt + "' (expected identity, power or exp)");
    }
  }
  if (auto p = root.find("panels")) g.panels = even_panels(*p);
  return g;
}

ChartPartition parse_partition(const Node& n, std::size_t m) {
  n.allow_keys({"base"});
  const Node base = n.at("base");
  try {
    return ChartPartition(m, base.indices(m));
  } catch (const InvalidArgument& e) {
    base.fail(e.message());
  }
}

CoordinateMap parse_stage(const Node& n, std::size_t m) {
  const std::string type = n.at("type").string();
  try {
    if (type == "identity") {
      n.allow_keys({"type"});
      return CoordinateMap::identity(m);
    }
    if (type == "permutation") {
      n.allow_keys({"type", "perm"});
      const Node p = n.at("perm");
      if (p.size() != m) p.fail("expected " + std::to_string(m) + " entries");
      return CoordinateMap::permutation(p.indices(m));
    }
    if (type == "affine") {
      n.allow_keys({"type", "linear", "offset"});
      const Vec offset = n.find("offset") ? n.at("offset").vector(m) : Vec::Zero(static_cast<Eigen::Index>(m));
      return CoordinateMap::affine(n.at("linear").matrix(m, m), offset);
    }
    if (type == "lorentz_boost") {
      n.allow_keys({"type", "ch", "sh", "rapidity", "axis"});
      double ch = 0, sh = 0;
      if (auto r = n.find("rapidity")) {
        if (n.has("ch") || n.has("sh")) n.fail("give either 'rapidity' or 'ch'/'sh'");
        ch = std::cosh(r->number());
        sh = std::sinh(r->number());
      } else {
        ch = n.at("ch").number();
        sh = n.at("sh").number();
        if (std::abs(ch * ch - sh * sh - 1.0) > 1e-12) n.fail("boost needs ch^2 - sh^2 = 1");
      }
      const std::size_t axis = n.find("axis") ? static_cast<std::size_t>(n.at("axis").unsigned_integer()) : 1;
      return CoordinateMap::lorentz_boost(m, ch, sh, axis);
    }
    if (type == "polynomial") {
      n.allow_keys({"type", "components", "domain"});
      const Node c = n.at("components");
      if (c.size() != m) c.fail("expected " + std::to_string(m) + " components");
      std::vector<Polynomial> comps;
      for (std::size_t k = 0; k < m; ++k) comps.push_back(parse_polynomial(c[k], m));
      std::optional<DomainBox> box;
      if (auto d = n.find("domain")) {
        d->allow_keys({"lower", "upper"});
        box = DomainBox{d->at("lower").vector(m), d->at("upper").vector(m)};
      }
      return CoordinateMap::polynomial(std::move(comps), box);
    }
  } catch (const InvalidArgument& e) {
    n.fail(e.message());
  }
  n.at("type").fail("unknown transition stage '" + type +
                    "' (expected identity, permutation, affine, lorentz_boost or polynomial)");
}

TransformSettings parse_transform(const Node& root, std::size_t m) {
  const ChartPartition p = parse_partition(root.at("partition"), m);
  const ChartPartition target = root.find("target_partition") ? parse_partition(root.at("target_partition"), m) : p;
  const Node jet = root.at("jet");
  jet.allow_keys({"point", "slopes"});
  SubmanifoldJet j{p, jet.at("point").vector(m), jet.at("slopes").matrix(m - p.n(), p.n())};
  const Node stages = root.at("transition");
  if (stages.size() == 0) stages.fail("transition needs at least one stage");
  CoordinateMap map = parse_stage(stages[0], m);
  for (std::size_t i = 1; i < stages.size(); ++i) map = map.then(parse_stage(stages[i], m));
  return TransformSettings{std::move(j), ChartTransition{p, target, std::move(map)}};
}

StringSettings parse_string(const Node& root, std::size_t m) {
  StringSettings s;
  const Node eta = root.at("eta");
  if (eta.raw().is_string()) {
    const std::string name = eta.string();
    if (name == "euclidean") {
      s.eta = Mat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    } else if (name == "minkowski") {
      s.eta = catalog::minkowski_matrix(m);
    } else {
      eta.fail("unknown target metric '" + name + "' (expected euclidean or minkowski)");
    }
  } else {
    s.eta = eta.matrix(m, m);
  }
  if (auto sf = root.find("signature_factor")) s.signature_factor = sf->sign();
  try {
    FlatTargetMetric check(s.eta, s.signature_factor);
  } catch (const InvalidArgument& e) {
    eta.fail(e.message());
  }
  if (auto md = root.find("min_det")) s.min_det = md->positive();
  if (auto a = root.find("action")) {
    a->allow_keys({"sheet", "diffeo", "panels", "tolerance"});
    s.action = true;
    if (auto sh = a->find("sheet")) {
      s.sheet = sh->string();
      if (s.sheet != "flat" && s.sheet != "cylinder") sh->fail("unknown sheet '" + s.sheet + "' (expected flat or cylinder)");
      if (s.sheet == "cylinder" && m < 3) sh->fail("the cylinder sheet needs dimension >= 3");
    }
    if (auto d = a->find("diffeo")) {
      s.diffeo = d->string();
      if (s.diffeo != "identity" && s.diffeo != "square" && s.diffeo != "shear")
        d->fail("unknown diffeomorphism '" + s.diffeo + "' (expected identity, square or shear)");
    }
    if (auto p = a->find("panels")) s.panels = even_panels(*p);
    if (auto t = a->find("tolerance")) s.action_tolerance = t->positive();
  }
  return s;
}

std::optional<RelativisticLagrangian> build_lagrangian(const Node& root, Kind kind, std::size_t m, std::size_t N) {
  std::optional<SymmetricTensorField> g;
  if (auto gn = root.find("G")) {
    g = parse_G(*gn, m, N);
  } else if (kind == Kind::CheckNoether) {
    if (N == 1) g = catalog::minkowski(m);
    else if (N == 2) g = catalog::quartic_eta2(m);
    else root.at("G");  // raises the missing-field error
  } else {
    root.at("G");
  }
  OneFormField a = root.find("A") ? parse_A(root.at("A"), m) : catalog::zero_form(m);
  return RelativisticLagrangian(std::move(*g), std::move(a));
}

}  // namespace

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::Simulate: return "simulate";
    case Kind::CheckNoether: return "check-noether";
    case Kind::CheckGauge: return "check-gauge";
    case Kind::Transform: return "transform";
    case Kind::Reduce: return "reduce";
    case Kind::StringCheck: return "string-check";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& json_text, Kind kind) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.require_object();
  root.allow_keys({"kind", "dimension", "N", "seed", "samples", "tolerance", "G", "A", "initial", "reduced",
                   "integrator", "random", "path", "reparametrization", "panels", "partition", "target_partition",
                   "jet", "transition", "eta", "signature_factor", "min_det", "action", "output"});

  Scenario s;
  s.kind = kind;
  if (auto k = root.find("kind")) {
    if (parse_kind(*k) != kind) k->fail("scenario is for '" + k->string() + "' but the command runs '" + kind_name(kind) + "'");
  }
  const Node dim = root.at("dimension");
  s.dimension = static_cast<std::size_t>(dim.unsigned_integer());
  if (s.dimension < 2) dim.fail("dimension must be at least 2");
  if (auto n = root.find("N")) {
    s.N = static_cast<std::size_t>(n->unsigned_integer());
    if (s.N < 1) n->fail("N must be at least 1");
  }
  if (auto seed = root.find("seed")) s.seed = seed->unsigned_integer();
  if (auto n = root.find("samples")) s.samples = static_cast<std::size_t>(n->unsigned_integer());
  if (auto t = root.find("tolerance")) s.tolerance = t->positive();
  if (auto out = root.find("output")) {
    out->allow_keys({"csv", "report"});
    if (auto c = out->find("csv")) s.csv_path = c->string();
    if (auto r = out->find("report")) s.report_path = r->string();
  }

  const std::size_t m = s.dimension;
  switch (kind) {
    case Kind::Simulate:
      s.lagrangian = build_lagrangian(root, kind, m, s.N);
      s.initial = parse_initial(root.at("initial"), m);
      s.integrator = parse_integrator(root.at("integrator"));
      break;
    case Kind::CheckNoether:
      s.lagrangian = build_lagrangian(root, kind, m, s.N);
      if (auto r = root.find("random")) s.noether = parse_noether(*r);
      if (s.samples == 0) root.at("samples").fail("need at least one sample");
      break;
    case Kind::CheckGauge:
      s.lagrangian = build_lagrangian(root, kind, m, s.N);
      s.gauge = parse_gauge(root, m);
      if (s.gauge->path == GaugeSettings::Path::Integrated) {
        s.initial = parse_initial(root.at("initial"), m);
        s.integrator = parse_integrator(root.at("integrator"));
      }
      break;
    case Kind::Transform:
      s.transform = parse_transform(root, m);
      break;
    case Kind::Reduce:
      s.lagrangian = build_lagrangian(root, kind, m, s.N);
      if (root.has("reduced") == root.has("initial")) root.fail("give exactly one of 'reduced' or 'initial'");
      if (auto r = root.find("reduced")) s.reduced = parse_reduced(*r, m);
      if (auto i = root.find("initial")) s.initial = parse_initial(*i, m);
      s.integrator = parse_integrator(root.at("integrator"));
      break;
    case Kind::StringCheck:
      s.string = parse_string(root, m);
      if (s.samples == 0 && !s.string->action) root.at("samples").fail("need at least one sample");
      break;
  }
  return s;
}

Scenario load_scenario(const std::string& path, Kind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), kind);
}

}  // namespace subjet::app
