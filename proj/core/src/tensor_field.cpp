#include "subjet/tensor_field.hpp"

#include <algorithm>

#include "subjet/errors.hpp"

namespace subjet {

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

double orderings(const SymmetricTensorField::Indices& sorted) {
  double denom = 1.0;
  std::size_t run = 1;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    if (k < sorted.size() && sorted[k] == sorted[k - 1]) {
      ++run;
    } else {
      denom *= factorial(run);
      run = 1;
    }
  }
  return factorial(sorted.size()) / denom;
}

// Calls f(sorted_indices) for every non-decreasing tuple of the given length.
template <class F>
void for_each_sorted_tuple(std::size_t dimension, std::size_t length, F&& f) {
  SymmetricTensorField::Indices idx(length, 0);
  while (true) {
    f(idx);
    std::size_t k = length;
    while (k > 0 && idx[k - 1] == dimension - 1) --k;
    if (k == 0) return;
    ++idx[k - 1];
    for (std::size_t j = k; j < length; ++j) idx[j] = idx[k - 1];
  }
}

}  // namespace

SymmetricTensorField::SymmetricTensorField(std::size_t dimension, std::size_t degree)
    : dimension_(dimension), degree_(degree) {
  if (dimension == 0) throw InvalidArgument("tensor field dimension must be positive");
  if (degree == 0 || degree % 2 != 0) {
    throw InvalidArgument("tensor field degree must be even and positive, got " + std::to_string(degree));
  }
}

SymmetricTensorField::Indices SymmetricTensorField::canonical(Indices indices) const {
  if (indices.size() != degree_) {
    throw InvalidArgument("expected " + std::to_string(degree_) + " indices, got " +
                          std::to_string(indices.size()));
  }
  for (std::size_t a : indices) {
    if (a >= dimension_) throw InvalidArgument("tensor index " + std::to_string(a) + " out of range");
  }
  std::sort(indices.begin(), indices.end());
  return indices;
}

void SymmetricTensorField::set(Indices indices, Polynomial coefficient) {
  if (coefficient.dimension() != dimension_) throw InvalidArgument("coefficient dimension mismatch");
  auto key = canonical(std::move(indices));
  if (coefficient.is_zero()) {
    entries_.erase(key);
    return;
  }
  double mult = orderings(key);
  entries_.insert_or_assign(std::move(key), Entry{std::move(coefficient), mult});
}

void SymmetricTensorField::set(Indices indices, double constant) {
  set(std::move(indices), Polynomial::constant(dimension_, constant));
}

void SymmetricTensorField::add(Indices indices, const Polynomial& coefficient) {
  set(indices, component(indices) + coefficient);
}

Polynomial SymmetricTensorField::component(Indices indices) const {
  auto it = entries_.find(canonical(std::move(indices)));
  if (it == entries_.end()) return Polynomial(dimension_);
  return it->second.coefficient;
}

double SymmetricTensorField::value(const Indices& indices, std::span<const double> q) const {
  auto it = entries_.find(canonical(indices));
  return it == entries_.end() ? 0.0 : it->second.coefficient(q);
}

OneFormField::OneFormField(std::size_t dimension) : components_(dimension, Polynomial(dimension)) {}

OneFormField::OneFormField(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.dimension() != components_.size()) throw InvalidArgument("one-form component dimension mismatch");
  }
}

Vec OneFormField::evaluate(const Vec& q) const {
  Vec a(dimension());
  for (std::size_t mu = 0; mu < dimension(); ++mu) a(mu) = components_[mu](q);
  return a;
}

FieldStrength::FieldStrength(const OneFormField& A) : dimension_(A.dimension()) {
  gradient_.reserve(dimension_ * dimension_);
  for (std::size_t l = 0; l < dimension_; ++l) {
    for (std::size_t m = 0; m < dimension_; ++m) {
      gradient_.push_back(A[m].derivative(l));
    }
  }
  for (std::size_t l = 0; l < dimension_ && vanishes_; ++l) {
    for (std::size_t m = 0; m < dimension_; ++m) {
      if (!(gradient_[l * dimension_ + m] + gradient_[m * dimension_ + l] * -1.0).is_zero()) {
        vanishes_ = false;
        break;
      }
    }
  }
}

Mat FieldStrength::evaluate(const Vec& q) const {
  Mat d(dimension_, dimension_);
  for (std::size_t l = 0; l < dimension_; ++l) {
    for (std::size_t m = 0; m < dimension_; ++m) d(l, m) = gradient_[l * dimension_ + m](q);
  }
  Mat f = d - d.transpose();
  return f;
}

namespace catalog {

SymmetricTensorField constant_metric(const Mat& metric) {
  if (metric.rows() != metric.cols()) throw InvalidArgument("metric must be square");
  const auto m = static_cast<std::size_t>(metric.rows());
  SymmetricTensorField g(m, 2);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      if (metric(a, b) != metric(b, a)) throw InvalidArgument("metric must be symmetric");
      if (metric(a, b) != 0.0) g.set({a, b}, metric(a, b));
    }
  }
  return g;
}

Mat minkowski_matrix(std::size_t dimension) {
  Mat eta = -Mat::Identity(dimension, dimension);
  eta(0, 0) = 1.0;
  return eta;
}

SymmetricTensorField minkowski(std::size_t dimension) { return constant_metric(minkowski_matrix(dimension)); }

SymmetricTensorField euclidean(std::size_t dimension) {
  return constant_metric(Mat::Identity(dimension, dimension));
}

SymmetricTensorField symmetric_square(const Mat& g) {
  const auto m = static_cast<std::size_t>(g.rows());
  SymmetricTensorField out(m, 4);
  for_each_sorted_tuple(m, 4, [&](const SymmetricTensorField::Indices& i) {
    double v = (g(i[0], i[1]) * g(i[2], i[3]) + g(i[0], i[2]) * g(i[1], i[3]) + g(i[0], i[3]) * g(i[1], i[2])) / 3.0;
    if (v != 0.0) out.set(i, v);
  });
  return out;
}

SymmetricTensorField quartic_eta2(std::size_t dimension) { return symmetric_square(minkowski_matrix(dimension)); }

OneFormField zero_form(std::size_t dimension) { return OneFormField(dimension); }

OneFormField constant_form(const Vec& components) {
  const auto m = static_cast<std::size_t>(components.size());
  std::vector<Polynomial> c;
  for (std::size_t mu = 0; mu < m; ++mu) c.push_back(Polynomial::constant(m, components(mu)));
  return OneFormField(std::move(c));
}

OneFormField linear_form(const Vec& offset, const Mat& slope) {
  const auto m = static_cast<std::size_t>(offset.size());
  if (slope.rows() != offset.size() || slope.cols() != offset.size()) {
    throw InvalidArgument("linear one-form slope must be m x m");
  }
  std::vector<Polynomial> c;
  for (std::size_t mu = 0; mu < m; ++mu) {
    Polynomial p = Polynomial::constant(m, offset(mu));
    for (std::size_t nu = 0; nu < m; ++nu) p += Polynomial::coordinate(m, nu) * slope(mu, nu);
    c.push_back(std::move(p));
  }
  return OneFormField(std::move(c));
}

OneFormField uniform_field(const Mat& field_strength) {
  if (field_strength.rows() != field_strength.cols()) throw InvalidArgument("field strength must be square");
  if (!(field_strength + field_strength.transpose()).isZero(0.0)) {
    throw InvalidArgument("field strength must be antisymmetric");
  }
  return linear_form(Vec::Zero(field_strength.rows()), -0.5 * field_strength);
}

}  // namespace catalog

}  // namespace subjet
