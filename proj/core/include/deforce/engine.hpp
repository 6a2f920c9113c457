#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deforce/kernels.hpp"
#include "deforce/profiles.hpp"
#include "deforce/quadrature.hpp"

namespace deforce {

/// Derivative-expansion terms of one functional evaluation. For base_dim 1
/// profiles the values are per unit length.
struct FunctionalResult {
  double F0 = 0.0;
  double F0_error = 0.0;
  std::optional<double> F2;
  double F2_error = 0.0;
  /// Only the (1/8) C [|grad psi|^4 + 2 (d_i d_j psi)^2] structure; the
  /// remaining fourth-order structures carry no known coefficients.
  std::optional<double> F4;
  double F4_error = 0.0;

  double total() const { return F0 + F2.value_or(0.0) + F4.value_or(0.0); }
  double total_error() const { return F0_error + F2_error + F4_error; }

  std::string kernel;
  std::string profile;
  std::string planform;
  double rho_max = 0.0;
  QuadratureSpec spec;
};

/// F0 = \int V(psi).
FunctionalResult eval_pfa(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec = {});

/// F0 + F2 with F2 = \int Z(psi) |grad psi|^2.
FunctionalResult eval_de2(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec = {});

/// (1/8) \int C(psi) [|grad psi|^4 + 2 sum_ij (d_i d_j psi)^2].
QuadResult eval_de4_term(const Density& C, const SurfaceProfile& p,
                         const QuadratureSpec& spec = {});

/// F0 + F2 + the partial fourth-order term; requires k.has_fourth_order().
FunctionalResult eval_de4(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec = {});

/// Generic surface integral \int f(psi, |grad psi|^2) over the profile's
/// planform, using the radial reduction when allowed.
QuadResult integrate_over_profile(const SurfaceProfile& p,
                                  const std::function<double(const ProfileSample&)>& f,
                                  const QuadratureSpec& spec);

struct DerjaguinResult {
  double energy = 0.0;
  double force = 0.0;
  double energy_error = 0.0;
  double effective_radius = 0.0;
};

/// U = 2 pi R_eff \int_d^inf E(h) dh, f = 2 pi R_eff E(d), with
/// R_eff = R1 R2 / (R1 + R2); R2 may be infinite (a plane).
DerjaguinResult eval_derjaguin(const Density& E, double d, double R1, double R2 = kInfinity,
                               const QuadratureSpec& spec = {});

/// \int_d^inf E(h) dh; throws NumericalError when E decays no faster than
/// 1/h.
QuadResult tail_integral(const Density& E, double d, const QuadratureSpec& spec = {});

/// Two-sheet body between near sheet psi1 and far sheet psi2 (psi1 <= psi2)
/// over a shared planform: \int [E(psi1) - E(psi2)].
QuadResult eval_sei(const Density& E, const SurfaceProfile& near_sheet,
                    const SurfaceProfile& far_sheet, const QuadratureSpec& spec = {});

/// First order in the coupling lambda_R of a dilute body in front of a
/// Dirichlet plane: (lambda_R / 32 pi^2) \int [1/psi1 - 1/psi2], computed as
/// the difference of the two single-surface integrals.
QuadResult dilute_oracle(double lambda_R, const SurfaceProfile& near_sheet,
                         const SurfaceProfile& far_sheet, const QuadratureSpec& spec = {});

/// E(h) = lambda_R / (32 pi^2 h), the parallel-plate density of the dilute
/// model.
Density dilute_parallel_plate(double lambda_R);

/// Binned level-set measure of the gap function, J(h) dh = area between
/// the level sets h and h + dh, with a linear fit J ~ J0 + J1 (h - d) on a
/// near-contact window.
struct JacobianProfile {
  std::vector<double> edges;    ///< bin edges, size bins + 1
  std::vector<double> centers;  ///< bin centres
  std::vector<double> values;   ///< J per bin (area / width)
  double d = 0.0;               ///< minimum gap
  double window_lo = 0.0, window_hi = 0.0;
  double J0 = 0.0;              ///< fitted J at h = d
  double J1 = 0.0;              ///< fitted slope dJ/dh
  bool degenerate = false;      ///< all area at a single gap value
  bool exact_level_sets = false;
  double total_area = 0.0;
};

struct JacobianOptions {
  int bins = 40;
  std::optional<double> h_min;  ///< default: profile minimum gap
  std::optional<double> h_max;  ///< default: profile maximum gap
  /// Fit window; default [d, d + 0.1 R] for profiles with a curvature
  /// radius, otherwise the full binned range.
  std::optional<double> window_lo;
  std::optional<double> window_hi;
  /// Cells per axis for the generic (non-radial) area count.
  int cells = 512;
  /// Subdivisions per axis applied once to cells that straddle a bin edge.
  int refine = 16;
  /// Monotone axisymmetric profiles: locate level sets by root finding
  /// instead of counting cells.
  bool prefer_level_sets = true;
};

JacobianProfile compute_jacobian(const SurfaceProfile& p, const JacobianOptions& opts = {});

/// f = J0 E(d) - J1 \int_d^inf E(h) dh.
double eval_blocki_force(const Density& E, double J0, double J1, double d,
                         const QuadratureSpec& spec = {});
double eval_blocki_force(const Density& E, const JacobianProfile& jac,
                         const QuadratureSpec& spec = {});

/// \int J(h) E(h) dh with J constant in each bin and E integrated over the
/// bin.
double jacobian_energy(const Density& E, const JacobianProfile& jac);

struct MethodRow {
  std::string method;
  std::optional<double> energy;
  std::optional<double> force;
  double energy_error = 0.0;
  std::optional<double> energy_ratio;  ///< energy / DE2 energy
  std::optional<double> force_ratio;   ///< force / DA force
  std::string note;
};

struct MethodTable {
  std::vector<MethodRow> rows;
  std::string kernel;
  std::string profile;
};

/// PFA, DE2, DA (needs a curvature radius), Blocki (energy from the binned
/// Jacobian, force from its linear fit) and, when a far sheet is given, SEI.
MethodTable compare_methods(const InteractionKernel& k, const SurfaceProfile& p,
                            const QuadratureSpec& spec = {},
                            const std::optional<SurfaceProfile>& far_sheet = std::nullopt,
                            const JacobianOptions& jac_opts = {});

}  // namespace deforce
