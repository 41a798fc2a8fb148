#pragma once

#include <array>
#include <cmath>

namespace nonholo {

/// Forward-mode dual number over N independent directions.
///
/// Nesting Dual<Dual<double, N>, N> carries second derivatives, three levels
/// carry third derivatives. Mixed partials are exact up to rounding; there is
/// no truncation error anywhere in the chain.
template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit constant
  constexpr Dual(const T& value, const std::array<T, N>& grad) : v(value), d(grad) {}
};

template <class T>
struct is_dual : std::false_type {};
template <class T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};

inline double primal(double x) { return x; }
template <class T, int N>
double primal(const Dual<T, N>& x) {
  return primal(x.v);
}

// Variable k seeded at every nesting level.
template <class T>
struct Seed {
  static T variable(double x, int) { return T(x); }
};

template <class T, int N>
struct Seed<Dual<T, N>> {
  static Dual<T, N> variable(double x, int k) {
    Dual<T, N> out;
    out.v = Seed<T>::variable(x, k);
    for (int a = 0; a < N; ++a) out.d[a] = T(a == k ? 1.0 : 0.0);
    return out;
  }
};

template <class T, int N>
Dual<T, N> operator+(const Dual<T, N>& a, const Dual<T, N>& b) {
  Dual<T, N> r;
  r.v = a.v + b.v;
  for (int k = 0; k < N; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> operator-(const Dual<T, N>& a, const Dual<T, N>& b) {
  Dual<T, N> r;
  r.v = a.v - b.v;
  for (int k = 0; k < N; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> operator-(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = -a.v;
  for (int k = 0; k < N; ++k) r.d[k] = -a.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> operator*(const Dual<T, N>& a, const Dual<T, N>& b) {
  Dual<T, N> r;
  r.v = a.v * b.v;
  for (int k = 0; k < N; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> operator*(double s, const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = s * a.v;
  for (int k = 0; k < N; ++k) r.d[k] = s * a.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> operator/(const Dual<T, N>& a, const Dual<T, N>& b) {
  Dual<T, N> r;
  T inv = T(1.0) / b.v;
  r.v = a.v * inv;
  for (int k = 0; k < N; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) * inv;
  return r;
}

// Chain rule: f(a) with f(a.v) = value, f'(a.v) = slope.
template <class T, int N>
Dual<T, N> chain(const Dual<T, N>& a, const T& value, const T& slope) {
  Dual<T, N> r;
  r.v = value;
  for (int k = 0; k < N; ++k) r.d[k] = slope * a.d[k];
  return r;
}

template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return chain(a, sin(a.v), cos(a.v));
}

template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return chain(a, cos(a.v), -sin(a.v));
}

template <class T, int N>
Dual<T, N> tan(const Dual<T, N>& a) {
  using std::tan;
  T t = tan(a.v);
  return chain(a, t, T(1.0) + t * t);
}

template <class T, int N>
Dual<T, N> exp(const Dual<T, N>& a) {
  using std::exp;
  T e = exp(a.v);
  return chain(a, e, e);
}

template <class T, int N>
Dual<T, N> log(const Dual<T, N>& a) {
  using std::log;
  return chain(a, log(a.v), T(1.0) / a.v);
}

template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return chain(a, s, T(0.5) / s);
}

template <class T, int N>
Dual<T, N> atan(const Dual<T, N>& a) {
  using std::atan;
  return chain(a, atan(a.v), T(1.0) / (T(1.0) + a.v * a.v));
}

template <class T, int N>
Dual<T, N> atan2(const Dual<T, N>& y, const Dual<T, N>& x) {
  using std::atan2;
  Dual<T, N> r;
  r.v = atan2(y.v, x.v);
  T inv = T(1.0) / (x.v * x.v + y.v * y.v);
  for (int k = 0; k < N; ++k) r.d[k] = (x.v * y.d[k] - y.v * x.d[k]) * inv;
  return r;
}

template <class T, int N>
Dual<T, N> sinh(const Dual<T, N>& a) {
  using std::cosh;
  using std::sinh;
  return chain(a, sinh(a.v), cosh(a.v));
}

template <class T, int N>
Dual<T, N> cosh(const Dual<T, N>& a) {
  using std::cosh;
  using std::sinh;
  return chain(a, cosh(a.v), sinh(a.v));
}

}  // namespace nonholo
