#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "subjet/lagrangian.hpp"
#include "subjet/nambu_goto.hpp"
#include "subjet/quadrature.hpp"
#include "subjet/sampling.hpp"

using namespace subjet;

namespace {

constexpr double kPi = std::numbers::pi;

FlatTargetMetric euclid(std::size_t m = 4) { return FlatTargetMetric(Mat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m))); }

Mat columns(const Vec& a, const Vec& b) {
  Mat z(a.size(), 2);
  z.col(0) = a;
  z.col(1) = b;
  return z;
}

Vec e(Eigen::Index k, Eigen::Index m = 4) { return Vec::Unit(m, k); }

// Cylinder z = (cos s1, sin s1, s2, 0).
Mat cylinder_tangent(double s1, double) {
  Mat t = Mat::Zero(4, 2);
  t(0, 0) = -std::sin(s1);
  t(1, 0) = std::cos(s1);
  t(2, 1) = 1.0;
  return t;
}

WorldsheetJet cylinder_jet(double s1) {
  WorldsheetJet j;
  j.z = (Vec(4) << std::cos(s1), std::sin(s1), 0, 0).finished();
  j.first = cylinder_tangent(s1, 0.0);
  j.second[0] = Mat::Zero(4, 2);
  j.second[1] = Mat::Zero(4, 2);
  j.second[0](0, 0) = -std::cos(s1);
  j.second[0](1, 0) = -std::sin(s1);
  return j;
}

// E_A by nested central differences along the straight second-order jet.
Vec fd_ng_variational_derivative(const FlatTargetMetric& eta, const WorldsheetJet& j) {
  const auto m = static_cast<Eigen::Index>(eta.dimension());
  const double hi = 1e-4, ho = 1e-3;
  Vec out = Vec::Zero(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (int mu = 0; mu < 2; ++mu) {
      auto momentum = [&](double t) {
        const Mat z1 = j.first + t * j.second[static_cast<std::size_t>(mu)];
        return oracle::fd5(
            [&](double h) {
              Mat zz = z1;
              zz(a, mu) += h;
              return ng_density(eta, zz);
            },
            hi);
      };
      out(a) -= oracle::fd5(momentum, ho);
    }
  }
  return out;
}

}  // namespace

TEST(FlatTargetMetric, Validation) {
  EXPECT_THROW(FlatTargetMetric(Mat::Identity(3, 2)), InvalidArgument);
  EXPECT_THROW(FlatTargetMetric(Mat::Identity(1, 1)), InvalidArgument);
  Mat asym = Mat::Identity(3, 3);
  asym(0, 1) = 1;
  EXPECT_THROW(FlatTargetMetric{asym}, InvalidArgument);
  EXPECT_THROW(FlatTargetMetric(Mat::Zero(3, 3)), InvalidArgument);
  EXPECT_THROW(FlatTargetMetric(Mat::Identity(3, 3), 2), InvalidArgument);
}

TEST(InducedMetric, Examples) {
  EXPECT_TRUE(induced_metric(euclid(), columns(e(0), e(1))).isApprox(Eigen::Matrix2d::Identity()));
  EXPECT_TRUE(induced_metric(euclid(), columns(e(0), e(0))).isApprox(Eigen::Matrix2d::Ones()));
  const FlatTargetMetric mink(oracle::minkowski_eta(4), -1);
  EXPECT_TRUE(induced_metric(mink, columns(e(0), e(1))).isApprox(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()));
}

TEST(NgDensity, Examples) {
  EXPECT_DOUBLE_EQ(ng_density(euclid(), columns(e(0), e(1))), 1.0);
  EXPECT_DOUBLE_EQ(ng_density(euclid(), columns(2 * e(0), 3 * e(1))), 6.0);
  EXPECT_THROW(ng_density(euclid(), columns(e(0), 2 * e(0))), DegenerateWorldsheet);
  EXPECT_DOUBLE_EQ(ng_density(FlatTargetMetric(oracle::minkowski_eta(4), -1), columns(e(0), e(1))), 1.0);
  EXPECT_THROW(ng_density(FlatTargetMetric(oracle::minkowski_eta(4), +1), columns(e(0), e(1))),
               DegenerateWorldsheet);
}

TEST(NgDensity, ExpansionIdentity) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    SampleStream rng(70, i);
    const auto eta = i % 2 ? euclid(5) : FlatTargetMetric(oracle::minkowski_eta(5), -1);
    const auto j = random_worldsheet_jet(rng, eta);
    const double det = induced_metric(eta, j.first).determinant();
    EXPECT_NEAR(ng_expanded_determinant(eta, j.first), det, 1e-12 * std::max(1.0, std::abs(det)));
  }
}

TEST(NgDensity, GL2Covariance) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    SampleStream rng(71, i);
    const auto eta = euclid(4);
    const auto j = random_worldsheet_jet(rng, eta);
    Mat mm(2, 2);
    mm << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
    if (std::abs(mm.determinant()) < 0.05) continue;
    const double base = ng_density(eta, j.first);
    EXPECT_NEAR(ng_density(eta, j.first * mm), std::abs(mm.determinant()) * base, 1e-12 * (1 + base));
  }
}

TEST(NgVariationalDerivative, AffineSheetIsMinimal) {
  SampleStream rng(72, 0);
  auto j = random_worldsheet_jet(rng, euclid());
  j.second[0].setZero();
  j.second[1].setZero();
  EXPECT_TRUE(ng_variational_derivative(euclid(), j).isZero(1e-15));
}

TEST(NgVariationalDerivative, CylinderHasNormalComponentOnly) {
  const auto j = cylinder_jet(0.7);
  const Vec ev = ng_variational_derivative(euclid(), j);
  // Unit-radius cylinder: E = -z_00 = radial unit vector.
  EXPECT_LT((ev - (Vec(4) << std::cos(0.7), std::sin(0.7), 0, 0).finished()).norm(), 1e-14);
  EXPECT_NEAR(j.first.col(0).dot(ev), 0.0, 1e-15);
  EXPECT_NEAR(j.first.col(1).dot(ev), 0.0, 1e-15);
}

TEST(NgVariationalDerivative, CylinderMatchesActionGradient) {
  // dS/de for z -> z + e b(s) e_A equals int E_A b over the patch.
  const auto eta = euclid();
  auto bump = [](double u, double v) {
    const double su = std::sin(kPi * u), sv = std::sin(kPi * v);
    return std::array<double, 3>{su * su * sv * sv, 2 * kPi * su * std::cos(kPi * u) * sv * sv,
                                 2 * kPi * sv * std::cos(kPi * v) * su * su};
  };
  const std::size_t panels = 128;
  for (Eigen::Index a : {0, 1, 2}) {
    auto action = [&](double eps) {
      WorldsheetPatch sheet;
      sheet.tangent = [&, eps](double u, double v) {
        Mat t = cylinder_tangent(u, v);
        const auto b = bump(u, v);
        t(a, 0) += eps * b[1];
        t(a, 1) += eps * b[2];
        return t;
      };
      return ng_action(eta, sheet, panels);
    };
    const double gradient = oracle::fd5(action, 1e-3);
    const double predicted = simpson_2d(
        [&](double u, double v) { return ng_variational_derivative(eta, cylinder_jet(u))(a) * bump(u, v)[0]; }, 0, 1,
        0, 1, panels, panels);
    EXPECT_NEAR(gradient, predicted, 2e-8) << a;
  }
  // The radial direction carries a genuine gradient.
  EXPECT_GT(std::abs(simpson_2d([&](double u, double v) { return std::cos(u) * bump(u, v)[0]; }, 0, 1, 0, 1, 64, 64)),
            0.1);
}

TEST(NgVariationalDerivative, MatchesFiniteDifferences) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    SampleStream rng(73, i);
    const auto eta = i % 2 ? euclid(4) : FlatTargetMetric(oracle::minkowski_eta(4), -1);
    const auto j = random_worldsheet_jet(rng, eta, 0.3);
    const Vec ad = ng_variational_derivative(eta, j);
    const Vec fd = fd_ng_variational_derivative(eta, j);
    EXPECT_LT((ad - fd).lpNorm<Eigen::Infinity>(), 1e-5 * std::max(1.0, ad.lpNorm<Eigen::Infinity>())) << i;
  }
}

TEST(NgVariationalDerivative, NoetherIdentitiesOnRandomJets) {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SampleStream rng(74, i);
    const auto eta = i % 2 ? euclid(4) : FlatTargetMetric(oracle::minkowski_eta(4), -1);
    const auto j = random_worldsheet_jet(rng, eta);
    const Vec ev = ng_variational_derivative(eta, j);
    const double scale = defect_scale(ev);
    worst = std::max({worst, std::abs(j.first.col(0).dot(ev)) / scale, std::abs(j.first.col(1).dot(ev)) / scale});
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(NgVariationalDerivative, RejectsAsymmetricSecondJet) {
  SampleStream rng(75, 0);
  auto j = random_worldsheet_jet(rng, euclid());
  j.second[0](0, 1) += 1.0;
  EXPECT_THROW(ng_variational_derivative(euclid(), j), InvalidArgument);
}

TEST(NgActionInvariance, FlatSquare) {
  WorldsheetPatch square{[](double, double) { return columns(e(0), e(1)); }};
  RectangleDiffeo id{[](double u, double v) { return std::pair{Eigen::Vector2d(u, v), Eigen::Matrix2d::Identity().eval()}; }};
  const auto exact = ng_action_invariance(euclid(), square, id, 16);
  EXPECT_EQ(exact.before, exact.after);

  RectangleDiffeo sq{[](double u, double v) {
    Eigen::Matrix2d jac;
    jac << 2 * u, 0, 0, 1;
    return std::pair{Eigen::Vector2d(u * u, v), jac};
  }};
  const auto r = ng_action_invariance(euclid(), square, sq, 256);
  EXPECT_NEAR(r.before, 1.0, 1e-12);
  EXPECT_NEAR(r.after, r.before, 1e-6);
}

TEST(NgActionInvariance, CylinderBoundaryFixingShear) {
  WorldsheetPatch cyl{cylinder_tangent};
  RectangleDiffeo shear{[](double u, double v) {
    const double k = 0.1;
    const double s = k * std::sin(kPi * u) * std::sin(kPi * v);
    Eigen::Matrix2d jac;
    jac << 1 + k * kPi * std::cos(kPi * u) * std::sin(kPi * v), k * kPi * std::sin(kPi * u) * std::cos(kPi * v), 0, 1;
    return std::pair{Eigen::Vector2d(u + s, v), jac};
  }};
  const auto r = ng_action_invariance(euclid(), cyl, shear, 256);
  EXPECT_NEAR(r.before, 1.0, 1e-12);
  EXPECT_NEAR(r.after, r.before, 1e-6);
}
