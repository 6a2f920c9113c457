// Reference computations used only by the tests. Nothing here calls the
// library's integrators.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule on [a, b] with n (even) panels, long double sums.
inline long double simpson(const std::function<long double(long double)>& f, long double a,
                           long double b, int n) {
  if (n % 2) ++n;
  const long double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

/// Simpson on a geometric sequence of sub-intervals [a, a r, a r^2, ...]
/// covering [a, b]; resolves integrands that vary on many scales.
inline long double simpson_geometric(const std::function<long double(long double)>& f,
                                     long double a, long double b, int pieces, int n) {
  long double total = 0.0L;
  const long double r = std::pow(b / a, 1.0L / pieces);
  long double lo = a;
  for (int i = 0; i < pieces; ++i) {
    const long double hi = (i + 1 == pieces) ? b : lo * r;
    total += simpson(f, lo, hi, n);
    lo = hi;
  }
  return total;
}

/// Midpoint Riemann sum of f(x, y) over [x0, x1] x [y0, y1].
inline long double riemann2d(const std::function<long double(long double, long double)>& f,
                             long double x0, long double x1, long double y0, long double y1,
                             int nx, int ny) {
  const long double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  long double s = 0.0L;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) s += f(x0 + (i + 0.5L) * hx, y0 + (j + 0.5L) * hy);
  return s * hx * hy;
}

/// Fourth-order central difference of f at x with step h.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double second_derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

inline double rel(double value, double expected) { return std::abs(value / expected - 1.0); }

/// Closed-form sphere gap, a + R (1 - sqrt(1 - rho^2 / R^2)).
inline double sphere_gap(double a, double R, double rho) {
  return a + R * (1.0 - std::sqrt(1.0 - rho * rho / (R * R)));
}

/// x^2 [(1 - 8x^2) cosh x - cosh 3x + 12 x sinh x] / sinh^5 x in long
/// double, with the two leading series terms below x = 1e-2.
inline long double z_bracket(long double x) {
  if (x < 1e-2L) return -16.0L / 3.0L * x + 16.0L / 5.0L * x * x * x;
  const long double b = (1 - 8 * x * x) * std::cosh(x) - std::cosh(3 * x) + 12 * x * std::sinh(x);
  return x * x * b / std::pow(std::sinh(x), 5);
}

}  // namespace oracle
