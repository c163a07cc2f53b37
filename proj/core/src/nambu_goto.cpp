#include "subjet/nambu_goto.hpp"

#include <vector>

#include "subjet/quadrature.hpp"

namespace subjet {

namespace {

std::vector<double> flatten(const Mat& first) {
  std::vector<double> x(static_cast<std::size_t>(first.size()));
  for (Eigen::Index mu = 0; mu < first.cols(); ++mu) {
    for (Eigen::Index a = 0; a < first.rows(); ++a) x[static_cast<std::size_t>(mu * first.rows() + a)] = first(a, mu);
  }
  return x;
}

void check_first(const FlatTargetMetric& eta, const Mat& first) {
  if (first.rows() != static_cast<Eigen::Index>(eta.dimension()) || first.cols() != 2) {
    throw InvalidArgument("first jet must be m x 2");
  }
}

}  // namespace

FlatTargetMetric::FlatTargetMetric(Mat eta, int signature_factor)
    : eta_(std::move(eta)), signature_factor_(signature_factor) {
  if (eta_.rows() != eta_.cols() || eta_.rows() < 2) throw InvalidArgument("target metric must be square, m >= 2");
  if (eta_ != eta_.transpose()) {
    throw InvalidArgument("target metric must be symmetric");
  }
  if (eta_.determinant() == 0.0) throw InvalidArgument("target metric must be non-degenerate");
  if (signature_factor != 1 && signature_factor != -1) throw InvalidArgument("signature factor must be +1 or -1");
}

bool WorldsheetJet::valid() const {
  if (first.cols() != 2 || z.size() != first.rows()) return false;
  for (const auto& s : second) {
    if (s.rows() != first.rows() || s.cols() != 2 || !s.allFinite()) return false;
  }
  return z.allFinite() && first.allFinite() && second[0].col(1) == second[1].col(0);
}

Eigen::Matrix2d induced_metric(const FlatTargetMetric& eta, const Mat& first) {
  check_first(eta, first);
  return first.transpose() * eta.eta() * first;
}

double ng_density(const FlatTargetMetric& eta, const Mat& first) {
  check_first(eta, first);
  const auto x = flatten(first);
  return ng_density_generic<double>(eta.eta(), eta.signature_factor(), x);
}

double ng_expanded_determinant(const FlatTargetMetric& eta, const Mat& first) {
  check_first(eta, first);
  const Vec z1 = first.col(0);
  const Vec z2 = first.col(1);
  const double h11 = z1.dot(eta.eta() * z1);
  const double h22 = z2.dot(eta.eta() * z2);
  const double h12 = z1.dot(eta.eta() * z2);
  return h11 * h22 - h12 * h12;
}

Vec ng_variational_derivative(const FlatTargetMetric& eta, const WorldsheetJet& jet) {
  check_first(eta, jet.first);
  if (!jet.valid()) throw InvalidArgument("worldsheet jet is malformed or its second jet is not symmetric");
  const auto m = static_cast<std::size_t>(eta.dimension());
  const auto x = flatten(jet.first);
  const std::array<std::vector<double>, 2> along{flatten(jet.second[0]), flatten(jet.second[1])};
  auto f = [&](auto xs) {
    using T = typename decltype(xs)::value_type;
    return ng_density_generic<T>(eta.eta(), eta.signature_factor(), xs);
  };
  // Raise DegenerateWorldsheet before differentiating.
  (void)ng_density_generic<double>(eta.eta(), eta.signature_factor(), x);
  Vec e = Vec::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t mu = 0; mu < 2; ++mu) {
      e(static_cast<Eigen::Index>(a)) -= ad::second_directional(f, x, ad::unit(2 * m, mu * m + a), along[mu]);
    }
  }
  return e;
}

double ng_action(const FlatTargetMetric& eta, const WorldsheetPatch& sheet, std::size_t panels) {
  return simpson_2d(
      [&](double u, double v) {
        const Mat t = sheet.tangent(u, v);
        if (t.col(0).isZero(0.0) || t.col(1).isZero(0.0)) return 0.0;
        return ng_density(eta, t);
      },
      sheet.u0, sheet.u1, sheet.v0, sheet.v1, panels, panels);
}

WorldsheetPatch reparametrize(const WorldsheetPatch& sheet, const RectangleDiffeo& diffeo) {
  WorldsheetPatch out;
  out.u0 = diffeo.u0;
  out.u1 = diffeo.u1;
  out.v0 = diffeo.v0;
  out.v1 = diffeo.v1;
  out.tangent = [sheet, diffeo](double u, double v) -> Mat {
    const auto [sigma, jac] = diffeo.map(u, v);
    if (jac.determinant() < 0.0) throw InvalidArgument("diffeomorphism must preserve orientation");
    return sheet.tangent(sigma(0), sigma(1)) * jac;
  };
  return out;
}

SheetActionPair ng_action_invariance(const FlatTargetMetric& eta, const WorldsheetPatch& sheet,
                                     const RectangleDiffeo& diffeo, std::size_t panels) {
  return {ng_action(eta, sheet, panels), ng_action(eta, reparametrize(sheet, diffeo), panels)};
}

}  // namespace subjet
