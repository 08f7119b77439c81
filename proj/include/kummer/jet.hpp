#pragma once

// Truncated Taylor series in one variable: f(s0 + e) = sum_k c[k] e^k + O(e^N).
// Radial formulas are written once as templates and evaluated on double or Jet.

#include <array>
#include <cmath>

namespace kummer {

template <int N>
struct Jet {
  std::array<double, N> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }  // NOLINT: constants promote

  static Jet variable(double s0) {
    Jet j(s0);
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  /// k-th derivative at s0.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k)
      for (int i = 0; i <= k; ++i) r.c[k] += a.c[i] * b.c[k - i];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) {
      double acc = a.c[k];
      for (int i = 1; i <= k; ++i) acc -= b.c[i] * r.c[k - i];
      r.c[k] = acc / b.c[0];
    }
    return r;
  }
  friend bool operator<(const Jet& a, const Jet& b) { return a.c[0] < b.c[0]; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.c[0] > b.c[0]; }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.c[0] <= b.c[0]; }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.c[0] >= b.c[0]; }
};

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double acc = a.c[k];
    for (int i = 1; i < k; ++i) acc -= r.c[i] * r.c[k - i];
    r.c[k] = acc / (2.0 * r.c[0]);
  }
  return r;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::log(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double acc = 0.0;
    for (int i = 1; i < k; ++i) acc += i * r.c[i] * a.c[k - i];
    r.c[k] = (a.c[k] - acc / k) / a.c[0];
  }
  return r;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += i * a.c[i] * r.c[k - i];
    r.c[k] = acc / k;
  }
  return r;
}

/// exp(a) - 1 without cancellation in the constant term.
template <int N>
Jet<N> expm1(const Jet<N>& a) {
  Jet<N> r = exp(a);
  r.c[0] = std::expm1(a.c[0]);
  return r;
}

/// asinh through its derivative 1/sqrt(1 + x^2), keeping the value term exact.
template <int N>
Jet<N> asinh(const Jet<N>& a) {
  Jet<N> x = a;
  x.c[0] = 0.0;
  // Compose the series of asinh around a.c[0] with the increment x.
  const Jet<N> t = Jet<N>::variable(a.c[0]);
  const Jet<N> d = Jet<N>(1.0) / sqrt(Jet<N>(1.0) + t * t);
  // Taylor coefficients of asinh at a.c[0]: value, then integrate d.
  std::array<double, N> coef{};
  coef[0] = std::asinh(a.c[0]);
  for (int k = 1; k < N; ++k) coef[k] = d.c[k - 1] / k;
  Jet<N> r(coef[N - 1]);
  for (int k = N - 2; k >= 0; --k) r = r * x + Jet<N>(coef[k]);
  return r;
}

}  // namespace kummer
