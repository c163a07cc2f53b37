#pragma once

// Nambu-Goto density of a two-dimensional worldsheet in a flat target with
// constant metric eta_AB:  L = (s det h)^{1/2},  h_{mu nu} = eta_AB z^A_mu z^B_nu.

#include <array>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "subjet/autodiff.hpp"
#include "subjet/errors.hpp"
#include "subjet/polynomial.hpp"

namespace subjet {

/// Constant non-degenerate target metric plus the sign s taken inside the
/// square root. s = +1 reproduces (det h)^{1/2} literally and suits
/// Euclidean-type eta; Lorentzian worldsheets in the usual string convention
/// take s = -1.
class FlatTargetMetric {
 public:
  explicit FlatTargetMetric(Mat eta, int signature_factor = +1);

  const Mat& eta() const { return eta_; }
  int signature_factor() const { return signature_factor_; }
  std::size_t dimension() const { return static_cast<std::size_t>(eta_.rows()); }

 private:
  Mat eta_;
  int signature_factor_;
};

/// Second-order jet of a worldsheet: z^A, z^A_mu (m x 2) and z^A_{mu nu},
/// stored as second[mu] = (m x 2) with second[mu](A, nu) = z^A_{mu nu}.
struct WorldsheetJet {
  Vec z;
  Mat first;
  std::array<Mat, 2> second;

  /// True when z^A_{01} == z^A_{10} and every entry is finite.
  bool valid() const;
};

Eigen::Matrix2d induced_metric(const FlatTargetMetric& eta, const Mat& first);

/// (s det h)^{1/2}; DegenerateWorldsheet when s det h <= 0.
double ng_density(const FlatTargetMetric& eta, const Mat& first);

/// The bracketed form [h11][h22] - [h12]^2 of det h, evaluated entry by entry.
double ng_expanded_determinant(const FlatTargetMetric& eta, const Mat& first);

/// Generic density over the flattened first jet x = (z^A_0..., z^A_1...).
template <class T>
T ng_density_generic(const Mat& eta, int signature, std::span<const T> x) {
  const auto m = static_cast<std::size_t>(eta.rows());
  T h[2][2];
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = mu; nu < 2; ++nu) {
      T sum(0.0);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          const double e = eta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          if (e == 0.0) continue;
          sum = sum + x[static_cast<std::size_t>(mu) * m + a] * x[static_cast<std::size_t>(nu) * m + b] * e;
        }
      }
      h[mu][nu] = sum;
    }
  }
  T det = (h[0][0] * h[1][1] - h[0][1] * h[0][1]) * static_cast<double>(signature);
  if (!(ad::primal(det) > 0.0)) throw DegenerateWorldsheet("s det h is not positive: worldsheet is degenerate");
  using ad::sqrt;
  using std::sqrt;
  return sqrt(det);
}

/// E_A = -d_mu (dL/dz^A_mu), the total derivative taken through the second
/// jet (the explicit z-dependence vanishes for constant eta).
Vec ng_variational_derivative(const FlatTargetMetric& eta, const WorldsheetJet& jet);

/// Immersion of a parameter rectangle, given by its tangent frame z^A_mu(sigma).
struct WorldsheetPatch {
  std::function<Mat(double, double)> tangent;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
};

/// Reparametrization of a rectangle: map returns (sigma(u), d sigma / d u).
struct RectangleDiffeo {
  std::function<std::pair<Eigen::Vector2d, Eigen::Matrix2d>(double, double)> map;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
};

/// Area-type action by tensor-product Simpson quadrature. Nodes with an
/// exactly zero tangent column (a collapsed boundary edge) contribute zero.
double ng_action(const FlatTargetMetric& eta, const WorldsheetPatch& sheet, std::size_t panels);

/// The patch composed with the diffeomorphism: z1(phi(u)) * Dphi(u).
WorldsheetPatch reparametrize(const WorldsheetPatch& sheet, const RectangleDiffeo& diffeo);

struct SheetActionPair {
  double before = 0.0;
  double after = 0.0;
};
SheetActionPair ng_action_invariance(const FlatTargetMetric& eta, const WorldsheetPatch& sheet,
                                     const RectangleDiffeo& diffeo, std::size_t panels);

}  // namespace subjet
