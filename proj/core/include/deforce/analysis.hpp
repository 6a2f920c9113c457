#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "deforce/engine.hpp"
#include "deforce/kernels.hpp"
#include "deforce/profiles.hpp"
#include "deforce/quadrature.hpp"

namespace deforce {

enum class FitModel { linear, log };
enum class Family { sphere, cylinder };

std::string to_string(FitModel m);
std::string to_string(Family f);

struct GammaFitOptions {
  Family family = Family::sphere;
  double R = 1.0;
  /// a/R values; sorted into decreasing order in the report.
  std::vector<double> ladder{1e-3, 2e-3, 4e-3, 8e-3};
  FitModel model = FitModel::linear;
  /// Planform radius over R for the primary fit, and the alternate value
  /// used to report the planform drift.
  double rho_m_frac = 0.9;
  double rho_m_frac_alt = 0.7;
  /// Largest admissible rung.
  double max_x = 0.02;
  /// Highest power of x kept among the nuisance terms.
  double max_exponent = 2.5;
  /// Largest accepted |ratio - model| over the ladder.
  double fit_tolerance = 1e-6;
  /// Overrides the analytic reference coefficient.
  std::optional<double> reference;
};

/// One rung of the ladder.
struct LadderPoint {
  double x = 0.0;        ///< a / R
  double energy = 0.0;   ///< DE2 total
  double error = 0.0;    ///< quadrature error of energy
  double lead = 0.0;     ///< analytic leading term
  double ratio = 0.0;    ///< energy / lead
  double ratio_error = 0.0;
};

/// x^exponent, times ln x when with_log is set.
struct FitTerm {
  double exponent = 1.0;
  bool with_log = false;

  double operator()(double x) const;
  std::string name() const;
  bool operator==(const FitTerm&) const = default;
};

/// Least-squares solution of (ratio - 1) = sum_k c_k t_k(x).
struct FitSolution {
  std::vector<FitTerm> terms;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  double residual_max = 0.0;
};

struct FitReport {
  FitModel model = FitModel::linear;
  Family family = Family::sphere;
  std::string kernel;
  double R = 1.0;
  int base_dim = 2;

  double gamma = 0.0;                  ///< coefficient of x
  std::optional<double> gamma_log;     ///< coefficient of x ln x (log model)
  double sigma_stat = 0.0;             ///< from quadrature errors
  double rung_drift = 0.0;             ///< change after dropping the largest rung
  double uncertainty = 0.0;            ///< sqrt(sigma_stat^2 + rung_drift^2)
  std::optional<double> sigma_stat_log, rung_drift_log, uncertainty_log;

  std::vector<FitTerm> terms;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  double residual_max = 0.0;
  double fit_tolerance = 0.0;

  std::vector<LadderPoint> ladder;     ///< strictly decreasing x
  double rho_m_frac = 0.9;
  double rho_m_frac_alt = 0.7;
  double gamma_alt = 0.0;              ///< gamma at the alternate planform
  std::optional<double> gamma_log_alt;
  double rho_m_drift = 0.0;            ///< |gamma - gamma_alt| / |gamma|
  std::optional<double> rho_m_drift_log;

  /// Analytic value of the coefficient the model targets (gamma_log for
  /// the log model, gamma otherwise) and the relative deviation from it.
  std::optional<double> reference;
  std::optional<double> deviation;

  /// energy / lead at the smallest rung.
  double leading_ratio = 0.0;
};

/// Leading small-distance energy of the osculating paraboloid for
/// V = v0 / psi^p on an n-dimensional base:
/// v0 (2 pi R)^(n/2) a^(n/2 - p) Gamma(p - n/2) / Gamma(p).
double leading_reference(const PowerLaw& law, int n, double a, double R);

/// Coefficient of a/R in U_DE2 / U_lead for V = v0/psi^p, Z = b v0/psi^p:
/// (n/2) (2b - (n + 2)/4) / (p - n/2 - 1). Throws when p - n/2 = 1, where
/// the correction is logarithmic.
double analytic_gamma(double p, int n, double b);

/// Coefficient of (a/R) ln(a/R) when p - n/2 = 1: -(n/2) (2b - (n + 2)/4).
double analytic_gamma_log(double p, int n, double b);

/// x (and x ln x for the log model) followed by the nuisance terms: powers
/// of x from the planform cut, x^(p - n/2 + k), and from the curvature of
/// the sphere, x^2, x^3, ...; coincident exponents gain an x^e ln x
/// partner. Exponents above max_exponent are dropped. Throws DomainError
/// when p - n/2 < 1, or when p - n/2 = 1 under the linear model.
std::vector<FitTerm> fit_terms(FitModel model, double p, int n, double max_exponent);

/// Weighted least squares with weights 1/x^2; covariance propagated from
/// the ratio errors. Trailing terms are dropped while there are more terms
/// than points.
FitSolution solve_fit(const std::vector<LadderPoint>& points, std::vector<FitTerm> terms);

/// Ratio U_DE2 / U_lead over the ladder for one planform.
std::vector<LadderPoint> gamma_ladder(const InteractionKernel& k, const GammaFitOptions& opts,
                                      double rho_m_frac, const QuadratureSpec& spec);

/// NTLO coefficient of the sphere or cylinder in front of a plane.
FitReport gamma_fit(const InteractionKernel& k, const GammaFitOptions& opts,
                    const QuadratureSpec& spec = {});

/// gamma_fit with the model forced to include x ln x.
FitReport gamma_fit_log(const InteractionKernel& k, GammaFitOptions opts,
                        const QuadratureSpec& spec = {});

struct ScalingEntry {
  int order = 0;        ///< 0, 2 or 4
  double lambda = 1.0;
  double expected = 1.0;  ///< lambda^(order - n)
  double measured = 1.0;  ///< F[psi_lambda] / F[psi]
  double violation = 0.0; ///< |measured / expected - 1|
};

struct ScalingReport {
  std::string profile;
  std::string kernel;
  std::vector<ScalingEntry> entries;
  double max_violation = 0.0;
  double tolerance = 1e-6;
  bool passed = true;
  std::string worst;  ///< description of the worst entry
};

/// F_2k[psi_lambda] = lambda^(2k - n) F_2k[psi] for every implemented
/// order (F4 only when the kernel has C and the profile a Hessian).
ScalingReport scaling_check(const InteractionKernel& k, const SurfaceProfile& p,
                            const std::vector<double>& lambdas, const QuadratureSpec& spec = {},
                            double tolerance = 1e-6);

struct AdditivityEntry {
  std::string profile;
  double em = 0.0;
  double sum = 0.0;        ///< D + N
  double relative = 0.0;   ///< |em - sum| / |sum|
  double combined_error = 0.0;
  bool passed = true;
};

struct AdditivityReport {
  std::vector<AdditivityEntry> entries;
  double max_relative = 0.0;
  double tolerance = 1e-9;
  bool passed = true;
};

/// U_DE2(em) = U_DE2(D) + U_DE2(N) on each profile. An entry passes when the
/// relative mismatch is within tolerance or the absolute mismatch within
/// the combined quadrature error.
AdditivityReport em_additivity_check(const std::vector<SurfaceProfile>& profiles,
                                     const QuadratureSpec& spec = {}, double tolerance = 1e-9,
                                     const InteractionKernel& em = kernel_casimir_em(),
                                     const InteractionKernel& dirichlet =
                                         kernel_casimir_scalar(Boundary::dirichlet),
                                     const InteractionKernel& neumann =
                                         kernel_casimir_scalar(Boundary::neumann));

}  // namespace deforce
