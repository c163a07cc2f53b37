#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> yields exact second
// directional derivatives u^T H w of any function written generically over
// its scalar type.

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace subjet::ad {

template <class T>
struct Dual {
  T val{};
  T eps{};

  constexpr Dual() = default;
  constexpr Dual(double x) : val(x), eps(0.0) {}  // NOLINT: implicit constants
  constexpr Dual(T x, T e) : val(std::move(x)), eps(std::move(e)) {}

  Dual& operator+=(const Dual& o) {
    val += o.val;
    eps += o.eps;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    eps -= o.eps;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    eps = eps * o.val + val * o.eps;
    val *= o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    eps = (eps * o.val - val * o.eps) / (o.val * o.val);
    val /= o.val;
    return *this;
  }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Innermost real value of a (possibly nested) dual number.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.val);
}

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.eps};
}
template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <class T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <class T>
Dual<T> operator/(Dual<T> a, const Dual<T>& b) {
  return a /= b;
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.val + b, a.eps};
}
template <class T>
Dual<T> operator+(double b, const Dual<T>& a) {
  return {a.val + b, a.eps};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.val - b, a.eps};
}
template <class T>
Dual<T> operator-(double b, const Dual<T>& a) {
  return {b - a.val, -a.eps};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.val * b, a.eps * b};
}
template <class T>
Dual<T> operator*(double b, const Dual<T>& a) {
  return {a.val * b, a.eps * b};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.val / b, a.eps / b};
}
template <class T>
Dual<T> operator/(double b, const Dual<T>& a) {
  return Dual<T>(b) / a;
}

using std::exp;
using std::log;
using std::pow;
using std::sqrt;

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.val);
  return {s, a.eps / (2.0 * s)};
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.val);
  return {e, a.eps * e};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  return {log(a.val), a.eps / a.val};
}

/// a^r for a real exponent; requires a > 0 unless r is a non-negative integer.
template <class T>
Dual<T> pow(const Dual<T>& a, double r) {
  T p = pow(a.val, r - 1.0);
  return {p * a.val, r * p * a.eps};
}

using D1 = Dual<double>;
using D2 = Dual<D1>;

/// Value and directional derivative df(x)[dir] of a generic scalar function.
struct FirstOrder {
  double value;
  double derivative;
};

template <class F>
FirstOrder directional(F&& f, std::span<const double> x, std::span<const double> dir) {
  std::vector<D1> xs(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) xs[k] = D1(x[k], dir[k]);
  D1 r = f(std::span<const D1>(xs));
  return {r.val, r.eps};
}

/// Mixed second directional derivative u^T H(x) w.
template <class F>
double second_directional(F&& f, std::span<const double> x, std::span<const double> u,
                          std::span<const double> w) {
  std::vector<D2> xs(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) xs[k] = D2(D1(x[k], u[k]), D1(w[k], 0.0));
  D2 r = f(std::span<const D2>(xs));
  return r.eps.eps;
}

/// Unit basis vector e_k in R^n.
inline std::vector<double> unit(std::size_t n, std::size_t k) {
  std::vector<double> e(n, 0.0);
  e[k] = 1.0;
  return e;
}

}  // namespace subjet::ad
