#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subjet/polynomial.hpp"

namespace subjet {

/// Fully symmetric covariant tensor field of even degree 2N on an
/// m-dimensional coordinate chart, with polynomial coefficient functions.
///
/// Only non-decreasing index tuples are stored, so symmetry is structural:
/// set({2,0}) and set({0,2}) address the same component. contract() sums over
/// all ordered index tuples, i.e. each stored component is weighted by the
/// number of distinct permutations of its indices.
class SymmetricTensorField {
 public:
  using Indices = std::vector<std::size_t>;

  SymmetricTensorField(std::size_t dimension, std::size_t degree);

  std::size_t dimension() const { return dimension_; }
  std::size_t degree() const { return degree_; }
  std::size_t half_degree() const { return degree_ / 2; }

  /// Replaces the component at the (sorted) index tuple.
  void set(Indices indices, Polynomial coefficient);
  void set(Indices indices, double constant);
  void add(Indices indices, const Polynomial& coefficient);

  /// Coefficient at an arbitrary (not necessarily sorted) index tuple; zero
  /// polynomial when absent.
  Polynomial component(Indices indices) const;

  struct Entry {
    Polynomial coefficient;
    double multiplicity;  // number of orderings of the index tuple
  };
  const std::map<Indices, Entry>& entries() const { return entries_; }

  /// G(q, v) = G_{a1..a2N}(q) v^{a1} ... v^{a2N}.
  template <class T>
  T contract(std::span<const T> q, std::span<const T> v) const {
    T sum(0.0);
    for (const auto& [idx, entry] : entries_) {
      T term = entry.coefficient.evaluate(q) * entry.multiplicity;
      for (std::size_t a : idx) term = term * v[a];
      sum = sum + term;
    }
    return sum;
  }

  /// Constant coefficient value G_{a1..a2N}(q) at any index ordering.
  double value(const Indices& indices, std::span<const double> q) const;

 private:
  Indices canonical(Indices indices) const;

  std::size_t dimension_;
  std::size_t degree_;
  std::map<Indices, Entry> entries_;
};

/// Covector field A_mu(q) with polynomial components.
class OneFormField {
 public:
  explicit OneFormField(std::size_t dimension);
  explicit OneFormField(std::vector<Polynomial> components);

  std::size_t dimension() const { return components_.size(); }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& operator[](std::size_t mu) const { return components_[mu]; }

  template <class T>
  T pair(std::span<const T> q, std::span<const T> v) const {
    T sum(0.0);
    for (std::size_t mu = 0; mu < components_.size(); ++mu) {
      if (components_[mu].is_zero()) continue;
      sum = sum + components_[mu].evaluate(q) * v[mu];
    }
    return sum;
  }

  Vec evaluate(const Vec& q) const;

 private:
  std::vector<Polynomial> components_;
};

/// F_{lm} = d_l A_m - d_m A_l, built from exact polynomial derivatives.
/// Evaluation forms D - D^T from the derivative table D_{lm} = d_l A_m, so
/// F(q) is antisymmetric bit for bit.
class FieldStrength {
 public:
  explicit FieldStrength(const OneFormField& A);

  std::size_t dimension() const { return dimension_; }
  Mat evaluate(const Vec& q) const;
  bool vanishes() const { return vanishes_; }

 private:
  std::size_t dimension_;
  std::vector<Polynomial> gradient_;  // row-major d_l A_m
  bool vanishes_ = true;
};

namespace catalog {

/// diag(+1, -1, ..., -1).
Mat minkowski_matrix(std::size_t dimension);

/// Minkowski metric diag(+1, -1, ..., -1), degree 2.
SymmetricTensorField minkowski(std::size_t dimension);
/// Euclidean metric diag(+1, ..., +1), degree 2.
SymmetricTensorField euclidean(std::size_t dimension);
/// Quartic sym(eta (x) eta) with eta Minkowski, so G(v) = eta(v, v)^2.
SymmetricTensorField quartic_eta2(std::size_t dimension);
/// Symmetrized tensor product sym(g (x) g) of a constant metric with itself.
SymmetricTensorField symmetric_square(const Mat& metric);
/// Degree-2 field with constant entries from a symmetric matrix.
SymmetricTensorField constant_metric(const Mat& metric);

OneFormField zero_form(std::size_t dimension);
OneFormField constant_form(const Vec& components);
/// A_mu = c_mu + B_{mu nu} q^nu.
OneFormField linear_form(const Vec& offset, const Mat& slope);
/// Gauge potential A_mu = -1/2 F_{mu nu} q^nu whose field strength is the
/// constant antisymmetric matrix F.
OneFormField uniform_field(const Mat& field_strength);

}  // namespace catalog

}  // namespace subjet
