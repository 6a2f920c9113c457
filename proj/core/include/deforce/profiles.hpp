#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deforce/domain.hpp"

namespace deforce {

enum class ProfileKind { sphere, cylinder, paraboloid, constant, gaussian_bump, grid, scaled };

/// Which sheet of a sphere the profile describes: the one facing the
/// plane, or the far side (used as the second sheet of a compact body).
enum class SphereSheet { near, far };

std::string to_string(ProfileKind kind);

/// Gap function and its derivatives at one base-plane point. Only the first
/// base_dim entries of grad and the leading base_dim x base_dim block of
/// hess are meaningful.
struct ProfileSample {
  double psi = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};

  double grad_norm2() const;
  /// Sum of squared Hessian entries, sum_ij (d_i d_j psi)^2.
  double hess_norm2() const;
};

/// Axisymmetric profiles as functions of rho = |x|.
struct RadialSample {
  double psi = 0.0;
  double d1 = 0.0;           ///< dpsi/drho
  double d2 = 0.0;           ///< d2psi/drho2
  double d1_over_rho = 0.0;  ///< dpsi/drho / rho, finite at rho = 0
};

namespace detail {
class ProfileShape;
}

/// Height field psi(x) > 0 over a planform in an n-dimensional base plane.
/// Immutable; copies share the underlying shape. All member functions are
/// safe to call concurrently.
class SurfaceProfile {
 public:
  ProfileKind kind() const;
  int base_dim() const;
  const Domain& planform() const;
  bool axisymmetric() const;
  bool has_hessian() const;

  /// Smallest and largest gap over the planform.
  double min_gap() const;
  double max_gap() const;

  /// Radius of curvature at the point of closest approach, for profiles
  /// that have a single rotationally symmetric minimum.
  std::optional<double> curvature_radius() const;

  /// Radial distances at which the integrand changes character; used to
  /// seed adaptive quadrature.
  std::vector<double> length_scales() const;

  /// Throws DomainError when x lies outside the planform.
  ProfileSample eval(std::span<const double> x) const;

  /// Only valid for axisymmetric profiles; rho must lie in the planform.
  RadialSample eval_radial(double rho) const;

  std::string describe() const;

  explicit SurfaceProfile(std::shared_ptr<const detail::ProfileShape> shape);
  const std::shared_ptr<const detail::ProfileShape>& shape_ptr() const { return shape_; }

 private:
  std::shared_ptr<const detail::ProfileShape> shape_;
};

/// psi = a + R (1 - sqrt(1 - rho^2 / R^2)) on rho <= rho_max < R.
/// base_dim 3 gives the hypersphere used for four-dimensional checks.
/// The far sheet is psi = a + R + sqrt(R^2 - rho^2).
SurfaceProfile make_sphere(double a, double radius, double rho_max, int base_dim = 2,
                           SphereSheet sheet = SphereSheet::near);

/// Sphere formula over a one-dimensional base |x| <= x_max; energies are
/// per unit length.
SurfaceProfile make_cylinder(double a, double radius, double x_max);

/// psi = a (1 + rho^2 / sigma^2); rho_max may be infinite.
SurfaceProfile make_paraboloid(double a, double sigma, double rho_max = kInfinity,
                               int base_dim = 2);

SurfaceProfile make_constant(double a, const Domain& planform);

/// psi = height + amplitude * exp(-rho^2 / width^2) on a disk of radius
/// rho_max. A negative amplitude is a bump towards the plane.
SurfaceProfile make_gaussian_bump(double height, double amplitude, double width, double rho_max);

/// Heights on a uniform Cartesian grid; values[i * ny + j] sits at
/// (x0 + i dx, y0 + j dy).
struct GridData {
  double x0 = 0.0, y0 = 0.0;
  double dx = 1.0, dy = 1.0;
  int nx = 0, ny = 0;
  std::vector<double> values;
};

/// Central differences in the interior and second-order one-sided stencils
/// at the edges; values between nodes are bilinear in psi and in each
/// derivative. Needs at least 3 nodes per axis, and 4 for Hessians.
SurfaceProfile make_grid(GridData data);

/// Reads "x1,x2,psi" rows. A leading comment line "# spacing: dx dy" is
/// required; the rows must cover the full grid at that spacing.
GridData read_grid_csv(const std::string& path);

/// psi_lambda(x) = psi(lambda x) on the planform shrunk by 1/lambda.
SurfaceProfile scale_lateral(const SurfaceProfile& profile, double lambda);

inline ProfileSample eval_profile(const SurfaceProfile& p, std::span<const double> x) {
  return p.eval(x);
}

}  // namespace deforce
