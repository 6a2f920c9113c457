#pragma once

#include <functional>
#include <span>
#include <vector>

#include "deforce/domain.hpp"

namespace deforce {

/// Accuracy controls shared by every integrator.
struct QuadratureSpec {
  double rel_tol = 1e-9;
  /// Absolute error floor; the target is max(abs_tol, rel_tol * |value|).
  double abs_tol = 0.0;
  /// Maximum number of panels per one-dimensional adaptive integration.
  int max_subdivisions = 2000;
  /// Integrate axisymmetric integrands as a single radial integral.
  bool axisymmetric_reduction = true;

  /// Throws DomainError unless rel_tol lies in (1e-14, 1e-2) and the
  /// remaining fields are sensible.
  void validate() const;

  /// Same spec with rel_tol (and abs_tol) scaled by factor.
  QuadratureSpec tightened(double factor) const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(std::span<const double>)>;

/// Globally adaptive 21-point Gauss-Kronrod integration over [lo, hi].
/// Either limit may be infinite; infinite ends are mapped to a finite
/// interval by x = lo + t / (1 - t). Optional interior breakpoints seed
/// the initial partition. Throws NumericalError when the subdivision
/// limit is reached (carrying the best estimate) or when f returns a
/// non-finite value (naming the abscissa).
QuadResult integrate_interval(const Integrand1D& f, double lo, double hi,
                              const QuadratureSpec& spec,
                              std::span<const double> breakpoints = {});

/// Integral of f over [lower, inf) through the map x = lower + t / (1 - t).
QuadResult integrate_improper(const Integrand1D& f, const QuadratureSpec& spec,
                              double lower = 0.0,
                              std::span<const double> breakpoints = {});

/// Integral over the n-dimensional ball of radius rho_max (possibly
/// infinite) of an integrand that depends only on rho = |x|:
/// surface(n) * \int_0^rho_max rho^(n-1) f(rho) drho.
QuadResult integrate_radial(const Integrand1D& f, double rho_max, int n,
                            const QuadratureSpec& spec,
                            std::span<const double> breakpoints = {});

/// Iterated adaptive integration of a general integrand over a domain of
/// dimension 1, 2 or 3. Disks and balls use polar / spherical coordinates.
/// radial_breakpoints seed the outer radial (or first-axis) partition.
QuadResult integrate_nd(const IntegrandND& f, const Domain& domain,
                        const QuadratureSpec& spec,
                        std::span<const double> radial_breakpoints = {});

}  // namespace deforce
