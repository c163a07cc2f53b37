#include "subjet/polynomial.hpp"

#include <algorithm>

#include "subjet/errors.hpp"

namespace subjet {

Polynomial::Polynomial(std::size_t dimension) : dimension_(dimension) {}

Polynomial Polynomial::constant(std::size_t dimension, double c) {
  Polynomial p(dimension);
  p.add_term(c, Exponents(dimension, 0));
  return p;
}

Polynomial Polynomial::coordinate(std::size_t dimension, std::size_t k) {
  if (k >= dimension) throw InvalidArgument("coordinate index out of range");
  Polynomial p(dimension);
  Exponents e(dimension, 0);
  e[k] = 1;
  p.add_term(1.0, e);
  return p;
}

unsigned Polynomial::total_degree() const {
  unsigned deg = 0;
  for (const auto& [exps, c] : terms_) {
    unsigned d = 0;
    for (unsigned e : exps) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

void Polynomial::add_term(double coefficient, const Exponents& exponents) {
  if (exponents.size() != dimension_) {
    throw InvalidArgument("polynomial term has " + std::to_string(exponents.size()) +
                          " exponents, expected " + std::to_string(dimension_));
  }
  if (coefficient == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(std::size_t k) const {
  if (k >= dimension_) throw InvalidArgument("derivative index out of range");
  Polynomial d(dimension_);
  for (const auto& [exps, c] : terms_) {
    if (exps[k] == 0) continue;
    Exponents e = exps;
    --e[k];
    d.add_term(c * exps[k], e);
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (dimension_ == 0 && terms_.empty()) dimension_ = other.dimension_;
  if (other.dimension_ != dimension_) throw InvalidArgument("polynomial dimension mismatch");
  for (const auto& [exps, c] : other.terms_) add_term(c, exps);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [exps, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw InvalidArgument("polynomial dimension mismatch");
  Polynomial r(dimension_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(dimension_);
      for (std::size_t l = 0; l < dimension_; ++l) e[l] = ea[l] + eb[l];
      r.add_term(ca * cb, e);
    }
  }
  return r;
}

}  // namespace subjet
