#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace subjet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// Multivariate real polynomial  sum_k c_k prod_l (q^l)^{e_kl}  in a fixed
/// number of variables. Terms with equal exponent tuples are merged and exact
/// zeros dropped, so two equal polynomials have equal term tables.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() = default;
  explicit Polynomial(std::size_t dimension);

  static Polynomial constant(std::size_t dimension, double c);
  /// The coordinate function q^k.
  static Polynomial coordinate(std::size_t dimension, std::size_t k);

  std::size_t dimension() const { return dimension_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;

  void add_term(double coefficient, const Exponents& exponents);

  /// d/dq^k, exact.
  Polynomial derivative(std::size_t k) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  Polynomial operator*(const Polynomial& other) const;

  double operator()(std::span<const double> q) const { return evaluate<double>(q); }
  double operator()(const Vec& q) const { return evaluate<double>(as_span(q)); }

  template <class T>
  T evaluate(std::span<const T> q) const {
    T sum(0.0);
    for (const auto& [exps, c] : terms_) {
      T term(c);
      for (std::size_t l = 0; l < exps.size(); ++l) {
        for (unsigned p = 0; p < exps[l]; ++p) term = term * q[l];
      }
      sum = sum + term;
    }
    return sum;
  }

 private:
  std::size_t dimension_ = 0;
  std::map<Exponents, double> terms_;
};

}  // namespace subjet
