#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deforce/quadrature.hpp"

namespace deforce {

using Density = std::function<double(double)>;

/// V = v0 / psi^p, Z = z0 / psi^p, and optionally C = c0 / psi^p.
struct PowerLaw {
  double v0 = 0.0;
  double z0 = 0.0;
  double p = 0.0;
  std::optional<double> c0;
};

/// Energy densities of the derivative expansion for one interaction:
/// F = \int [ V(psi) + Z(psi) |grad psi|^2 + fourth-order terms ].
/// V doubles as the parallel-plate density E(h). Immutable and safe to
/// share between threads.
class InteractionKernel {
 public:
  InteractionKernel(std::string name, int plane_dim, Density V, Density Z,
                    Density C = {}, std::optional<PowerLaw> power_law = std::nullopt,
                    std::map<std::string, double> parameters = {});

  const std::string& name() const { return name_; }

  /// Dimension of the base plane the densities were derived for; profiles
  /// may have this dimension or fewer (translation-invariant directions).
  /// Zero means any.
  int plane_dim() const { return plane_dim_; }

  double V(double psi) const { return V_(psi); }
  double Z(double psi) const { return Z_(psi); }
  bool has_fourth_order() const { return static_cast<bool>(C_); }
  double C(double psi) const;
  double parallel_plate(double h) const { return V_(h); }

  const Density& V_density() const { return V_; }
  const Density& Z_density() const { return Z_; }
  const Density& C_density() const { return C_; }

  /// Set for kernels that are pure powers of the gap.
  const std::optional<PowerLaw>& power_law() const { return power_law_; }

  /// Physical constants the kernel was built from (eps0, V0, beta, ...).
  const std::map<std::string, double>& parameters() const { return parameters_; }

  /// Throws DomainError when a profile of this base dimension cannot be
  /// used with the kernel.
  void check_base_dim(int profile_base_dim) const;

 private:
  std::string name_;
  int plane_dim_;
  Density V_, Z_, C_;
  std::optional<PowerLaw> power_law_;
  std::map<std::string, double> parameters_;
};

enum class Boundary { dirichlet, neumann };

std::string to_string(Boundary bc);

/// alpha and beta of -(pi^2/1440) (alpha + beta |grad psi|^2) / psi^3.
struct CasimirCoefficients {
  double alpha;
  double beta;
};
CasimirCoefficients casimir_coefficients(Boundary bc);

InteractionKernel kernel_casimir_scalar(Boundary bc);

/// Perfect-conductor electromagnetic kernel: Dirichlet plus Neumann.
InteractionKernel kernel_casimir_em();

/// Conductors held at potential difference V0.
InteractionKernel kernel_electrostatic(double V0, double eps0);

/// Infinite-temperature Dirichlet free energy. plane_dim 2 is the
/// three-dimensional case with 1/psi^2 densities; plane_dim 3 applies
/// dimensional reduction to the zero-temperature three-dimensional
/// coefficients.
InteractionKernel kernel_highT_dirichlet(double beta, int plane_dim);

InteractionKernel kernel_power_law(double v0, double z0, double p,
                                   std::optional<double> c0 = std::nullopt, int plane_dim = 0);

/// Dimensionless patch autocorrelation g(u) in
/// Omega(k) = V_rms^2 l^2 g(|k| l).
class PatchCorrelation {
 public:
  /// g(u) = 4 pi exp(-u^2).
  static PatchCorrelation gaussian();
  /// g(u) = 2 pi exp(-u).
  static PatchCorrelation exponential();
  /// Monotone cubic (PCHIP) interpolation of tabulated (u, g) with u[0] = 0;
  /// zero beyond the last node.
  static PatchCorrelation table(std::vector<double> u, std::vector<double> g);
  static PatchCorrelation from_csv(const std::string& path);
  static PatchCorrelation custom(std::string name, std::function<double(double)> g);

  double operator()(double u) const { return g_(u); }
  double at_origin() const { return g_(0.0); }
  const std::string& name() const { return name_; }

  /// \int_0^inf u g(u) du.
  double normalization(const QuadratureSpec& spec = {}) const;

  /// Copy rescaled so that the normalization integral equals 2 pi.
  PatchCorrelation normalized(const QuadratureSpec& spec = {}) const;

  /// Throws DomainError (reporting the computed integral) unless the
  /// normalization matches 2 pi to relative tolerance tol.
  void require_normalized(double tol = 1e-6) const;

 private:
  PatchCorrelation(std::string name, std::function<double(double)> g)
      : name_(std::move(name)), g_(std::move(g)) {}

  std::string name_;
  std::function<double(double)> g_;
};

inline constexpr double kPatchNormalization = 6.283185307179586476925286766559;

/// v(xi) = -(2/pi) xi^2 \int_0^inf x^2 / (e^{2x} - 1) g(x xi) dx.
QuadResult patch_v(double xi, const PatchCorrelation& corr, const QuadratureSpec& spec = {});

/// z(xi) = xi^2 / (16 pi) \int_0^inf x^2 g(x xi) B(x) / sinh^5(x) dx with
/// B(x) = (1 - 8x^2) cosh x - cosh 3x + 12 x sinh x.
QuadResult patch_z(double xi, const PatchCorrelation& corr, const QuadratureSpec& spec = {});

/// x^2 B(x) / sinh^5(x), evaluated by series near the origin.
double patch_z_weight(double x);

/// V = eps0 V_rms^2 v(l/psi) / psi and Z = eps0 V_rms^2 z(l/psi) / psi.
/// The correlation must satisfy \int u g(u) du = 2 pi.
InteractionKernel kernel_patch(const PatchCorrelation& corr, double V_rms, double ell, double eps0,
                               const QuadratureSpec& spec = {});

}  // namespace deforce
