#pragma once

// Chart algebra for first-order jets of n-dimensional submanifolds of an
// m-dimensional manifold Z, and the correspondence between those jets and
// jets of sections of the trivial bundle Sigma x Z -> Sigma.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subjet/polynomial.hpp"

namespace subjet {

/// Split of the coordinates z^A into n base coordinates x^a and m - n fiber
/// coordinates y^i. Any of the (m choose n) partitions is a valid chart.
class ChartPartition {
 public:
  ChartPartition(std::size_t m, std::vector<std::size_t> base_indices);

  /// Base = {0, ..., n-1}.
  static ChartPartition leading(std::size_t m, std::size_t n);

  std::size_t m() const { return m_; }
  std::size_t n() const { return base_.size(); }
  const std::vector<std::size_t>& base_indices() const { return base_; }
  const std::vector<std::size_t>& fiber_indices() const { return fiber_; }

  friend bool operator==(const ChartPartition&, const ChartPartition&) = default;

 private:
  std::size_t m_;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> fiber_;
};

/// Jet of submanifolds: point z and slopes y^i_a = dy^i/dx^a, (m-n) x n.
struct SubmanifoldJet {
  ChartPartition partition;
  Vec point;
  Mat slopes;
};

/// Jet of sections of Sigma x Z -> Sigma: (sigma^mu, z^A, z^A_mu).
struct SectionJet {
  Vec sigma;
  Vec point;
  Mat velocity;  // m x n
};

/// Axis-aligned box on which a polynomial coordinate map is declared.
struct DomainBox {
  Vec lower;
  Vec upper;
  bool contains(const Vec& z) const;
};

/// Coordinate change z -> z' on an m-dimensional chart, built from a chain of
/// affine and polynomial stages so Jacobians stay exact.
class CoordinateMap {
 public:
  static CoordinateMap identity(std::size_t m);
  /// z'^k = z^{perm[k]}.
  static CoordinateMap permutation(const std::vector<std::size_t>& perm);
  static CoordinateMap affine(const Mat& linear, const Vec& offset);
  /// Boost mixing coordinates 0 and `axis`:
  ///   z'^0 = z^0 ch - z^axis sh,   z'^axis = -z^0 sh + z^axis ch.
  static CoordinateMap lorentz_boost(std::size_t m, double ch, double sh, std::size_t axis = 1);
  /// z'^k = components[k](z), optionally restricted to a domain box.
  static CoordinateMap polynomial(std::vector<Polynomial> components, std::optional<DomainBox> domain = {});

  std::size_t dimension() const { return dimension_; }
  const std::string& description() const { return description_; }

  /// Throws DomainError outside a declared domain.
  Vec apply(const Vec& z) const;
  Mat jacobian(const Vec& z) const;

  /// Apply *this first, then `next`.
  CoordinateMap then(const CoordinateMap& next) const;
  /// Exact inverse; available only when every stage is affine.
  std::optional<CoordinateMap> inverse() const;

 private:
  struct AffineStage {
    Mat linear;
    Vec offset;
  };
  struct PolynomialStage {
    std::vector<Polynomial> components;
    std::vector<Polynomial> jacobian;  // row-major d z'^k / d z^l
    std::optional<DomainBox> domain;
  };
  using Stage = std::variant<AffineStage, PolynomialStage>;

  CoordinateMap(std::size_t dimension, std::vector<Stage> stages, std::string description);

  std::size_t dimension_;
  std::vector<Stage> stages_;
  std::string description_;
};

/// Transition between two partitioned charts (x, y) -> (x', y').
struct ChartTransition {
  ChartPartition source;
  ChartPartition target;
  CoordinateMap map;

  std::string description() const { return map.description(); }

  /// *this followed by `next` (requires target == next.source).
  ChartTransition then(const ChartTransition& next) const;
  std::optional<ChartTransition> inverse() const;
};

/// Default bound on the condition estimate of M and of mass-like matrices.
inline constexpr double kMaxCondition = 1e12;
/// Default relative singular-value threshold for regularity.
inline constexpr double kRegularityTolerance = 1e-9;

/// Slope transformation law  y'^j_a = (dy'^j/dy^k y^k_b + dy'^j/dx^b) (M^-1)^b_a
/// with M^c_b = dx'^c/dy^k y^k_b + dx'^c/dx^b. Throws SingularTransition when
/// M is numerically singular.
SubmanifoldJet transform_jet(const SubmanifoldJet& jet, const ChartTransition& t,
                             double max_condition = kMaxCondition);

/// True iff the velocity matrix has full column rank n: smallest singular
/// value above tol times the largest.
bool is_regular(const SectionJet& jet, double tol = kRegularityTolerance);

/// Slopes y^i_a = y^i_mu (x^-1)^mu_a; for n = 1 this is q^i_0 = q^i_tau / q^0_tau.
/// Throws NonRegularInChart when the base block is singular within tol.
SubmanifoldJet section_to_submanifold(const SectionJet& jet, const ChartPartition& partition,
                                      double tol = kRegularityTolerance);

/// The representative with x-block base_velocity and y-block y^i_a x^a_mu.
SectionJet submanifold_to_sections(const SubmanifoldJet& jet, const Mat& base_velocity, Vec sigma = {});

/// Section-jet velocities under a point transformation: z'_mu = J z_mu.
SectionJet transform_section(const SectionJet& jet, const CoordinateMap& map);

}  // namespace subjet
