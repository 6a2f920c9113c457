#include "deforce/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fstream>
#include <numbers>
#include <sstream>

#include "deforce/error.hpp"

namespace deforce {
namespace {

using std::numbers::pi;

constexpr double kCasimirScale = pi * pi / 1440.0;

const double kZeta3 = std::riemann_zeta(3.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

InteractionKernel::InteractionKernel(std::string name, int plane_dim, Density V, Density Z,
                                     Density C, std::optional<PowerLaw> power_law,
                                     std::map<std::string, double> parameters)
    : name_(std::move(name)), plane_dim_(plane_dim), V_(std::move(V)), Z_(std::move(Z)),
      C_(std::move(C)), power_law_(std::move(power_law)), parameters_(std::move(parameters)) {
  if (!V_ || !Z_) throw DomainError("InteractionKernel: V and Z densities are required");
}

double InteractionKernel::C(double psi) const {
  if (!C_) throw DomainError("kernel " + name_ + " has no fourth-order density");
  return C_(psi);
}

void InteractionKernel::check_base_dim(int profile_base_dim) const {
  if (plane_dim_ != 0 && profile_base_dim > plane_dim_)
    throw DomainError("kernel " + name_ + " is defined on a " + std::to_string(plane_dim_) +
                      "-dimensional base plane; profile has base dimension " +
                      std::to_string(profile_base_dim));
}

std::string to_string(Boundary bc) { return bc == Boundary::dirichlet ? "dirichlet" : "neumann"; }

CasimirCoefficients casimir_coefficients(Boundary bc) {
  if (bc == Boundary::dirichlet) return {1.0, 2.0 / 3.0};
  return {1.0, 2.0 / 3.0 * (1.0 - 30.0 / (pi * pi))};
}

InteractionKernel kernel_power_law(double v0, double z0, double p, std::optional<double> c0,
                                   int plane_dim) {
  if (!(p > 0.0)) throw DomainError("kernel_power_law: exponent p must be positive");
  if (!std::isfinite(v0) || !std::isfinite(z0) || (c0 && !std::isfinite(*c0)))
    throw DomainError("kernel_power_law: coefficients must be finite");
  Density V = [v0, p](double psi) { return v0 * std::pow(psi, -p); };
  Density Z = [z0, p](double psi) { return z0 * std::pow(psi, -p); };
  Density C;
  if (c0) C = [c = *c0, p](double psi) { return c * std::pow(psi, -p); };
  std::map<std::string, double> params{{"v0", v0}, {"z0", z0}, {"p", p}};
  if (c0) params["c0"] = *c0;
  return InteractionKernel("power_law", plane_dim, std::move(V), std::move(Z), std::move(C),
                           PowerLaw{v0, z0, p, c0}, std::move(params));
}

namespace {

InteractionKernel renamed_power_law(std::string name, int plane_dim, double v0, double z0, double p,
                                    std::map<std::string, double> params) {
  Density V = [v0, p](double psi) { return v0 * std::pow(psi, -p); };
  Density Z = [z0, p](double psi) { return z0 * std::pow(psi, -p); };
  return InteractionKernel(std::move(name), plane_dim, std::move(V), std::move(Z), {},
                           PowerLaw{v0, z0, p, std::nullopt}, std::move(params));
}

}  // namespace

InteractionKernel kernel_casimir_scalar(Boundary bc) {
  const auto [alpha, beta] = casimir_coefficients(bc);
  return renamed_power_law("casimir_scalar_" + to_string(bc), 2, -kCasimirScale * alpha,
                           -kCasimirScale * beta, 3.0, {{"alpha", alpha}, {"beta", beta}});
}

InteractionKernel kernel_casimir_em() {
  const InteractionKernel d = kernel_casimir_scalar(Boundary::dirichlet);
  const InteractionKernel n = kernel_casimir_scalar(Boundary::neumann);
  const auto cd = casimir_coefficients(Boundary::dirichlet);
  const auto cn = casimir_coefficients(Boundary::neumann);
  Density V = [d, n](double psi) { return d.V(psi) + n.V(psi); };
  Density Z = [d, n](double psi) { return d.Z(psi) + n.Z(psi); };
  const PowerLaw law{d.power_law()->v0 + n.power_law()->v0, d.power_law()->z0 + n.power_law()->z0,
                     3.0, std::nullopt};
  return InteractionKernel("casimir_em", 2, std::move(V), std::move(Z), {}, law,
                           {{"alpha", cd.alpha + cn.alpha}, {"beta", cd.beta + cn.beta}});
}

InteractionKernel kernel_electrostatic(double V0, double eps0) {
  if (!std::isfinite(V0)) throw DomainError("kernel_electrostatic: V0 must be finite");
  if (!(eps0 > 0.0) || !std::isfinite(eps0))
    throw DomainError("kernel_electrostatic: eps0 must be positive");
  const double c = 0.5 * eps0 * V0 * V0;
  return renamed_power_law("electrostatic", 2, c, c / 3.0, 1.0, {{"V0", V0}, {"eps0", eps0}});
}

InteractionKernel kernel_highT_dirichlet(double beta, int plane_dim) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("kernel_highT_dirichlet: inverse temperature beta must be positive");
  if (plane_dim == 2) {
    const double v0 = -kZeta3 / (16.0 * pi * beta);
    const double z0 = v0 * (1.0 + 6.0 * kZeta3) / (12.0 * kZeta3);
    return renamed_power_law("highT_dirichlet_d3", 2, v0, z0, 2.0, {{"beta", beta}});
  }
  if (plane_dim == 3) {
    // Dimensional reduction: (1/beta) times the zero-temperature d = 3
    // Dirichlet coefficients.
    const auto c = casimir_coefficients(Boundary::dirichlet);
    return renamed_power_law("highT_dirichlet_d4", 3, -kCasimirScale * c.alpha / beta,
                             -kCasimirScale * c.beta / beta, 3.0, {{"beta", beta}});
  }
  throw DomainError("kernel_highT_dirichlet: only plane dimensions 2 and 3 are supported "
                    "(higher-dimensional coefficients are not available)");
}

// ---------------------------------------------------------------------------
// Patch potentials

PatchCorrelation PatchCorrelation::gaussian() {
  return PatchCorrelation("gaussian", [](double u) { return 4.0 * pi * std::exp(-u * u); });
}

PatchCorrelation PatchCorrelation::exponential() {
  return PatchCorrelation("exponential", [](double u) { return 2.0 * pi * std::exp(-u); });
}

PatchCorrelation PatchCorrelation::custom(std::string name, std::function<double(double)> g) {
  if (!g) throw DomainError("PatchCorrelation: empty function");
  return PatchCorrelation(std::move(name), std::move(g));
}

PatchCorrelation PatchCorrelation::table(std::vector<double> u, std::vector<double> g) {
  if (u.size() != g.size() || u.size() < 4)
    throw DomainError("PatchCorrelation::table: need at least 4 (u, g) pairs of equal length");
  if (u.front() != 0.0) throw DomainError("PatchCorrelation::table: first node must be u = 0");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) throw DomainError("PatchCorrelation::table: u must be strictly increasing");
  for (double v : g)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("PatchCorrelation::table: g must be finite and non-negative");
  const double u_last = u.back();
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto spline = std::make_shared<const Pchip>(std::move(u), std::move(g));
  return PatchCorrelation("table", [spline, u_last](double x) {
    if (x > u_last) return 0.0;
    return std::max(0.0, (*spline)(x));
  });
}

PatchCorrelation PatchCorrelation::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("PatchCorrelation::from_csv: cannot open " + path);
  std::vector<double> u, g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    if (!(ss >> a >> b)) {
      if (u.empty()) continue;  // header row
      throw DomainError("PatchCorrelation::from_csv: malformed row '" + line + "'");
    }
    u.push_back(a);
    g.push_back(b);
  }
  PatchCorrelation c = table(std::move(u), std::move(g));
  c.name_ = "table:" + path;
  return c;
}

double PatchCorrelation::normalization(const QuadratureSpec& spec) const {
  const std::array<double, 4> cuts{0.5, 1.0, 2.0, 8.0};
  return integrate_improper([this](double u) { return u * g_(u); }, spec, 0.0, cuts).value;
}

PatchCorrelation PatchCorrelation::normalized(const QuadratureSpec& spec) const {
  const double n = normalization(spec);
  if (!(n > 0.0)) throw DomainError("PatchCorrelation::normalized: normalization integral is not positive");
  const double s = kPatchNormalization / n;
  auto g = g_;
  return PatchCorrelation(name_, [g, s](double u) { return s * g(u); });
}

void PatchCorrelation::require_normalized(double tol) const {
  const double n = normalization();
  if (!(std::abs(n / kPatchNormalization - 1.0) <= tol))
    throw DomainError("patch correlation '" + name_ + "' is not normalized: \\int u g(u) du = " +
                      fmt(n) + ", expected 2*pi = " + fmt(kPatchNormalization));
}

double patch_z_weight(double x) {
  if (x < 0.25) {
    // Taylor series of x^2 B(x) / sinh^5(x) in odd powers of x.
    static constexpr std::array<double, 8> c = {
        -16.0 / 3.0,          16.0 / 5.0,
        -1072.0 / 945.0,      4352.0 / 14175.0,
        -3632.0 / 51975.0,    1796416.0 / 127702575.0,
        -4947808.0 / 1915538625.0, 27392.0 / 62026965.0};
    const double x2 = x * x;
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x2 + *it;
    return x * s;
  }
  if (x > 100.0) return 0.0;
  const double sh = std::sinh(x);
  const double bracket = (1.0 - 8.0 * x * x) * std::cosh(x) - std::cosh(3.0 * x) + 12.0 * x * sh;
  const double sh2 = sh * sh;
  return x * x * bracket / (sh2 * sh2 * sh);
}

namespace {

std::vector<double> patch_breakpoints(double xi) {
  std::vector<double> cuts = {1.0, 4.0, 16.0};
  for (double s : {0.25, 1.0, 4.0}) cuts.push_back(s / xi);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

void require_xi(double xi, const char* who) {
  if (!(xi > 0.0) || !std::isfinite(xi))
    throw DomainError(std::string(who) + ": xi must be positive and finite");
}

}  // namespace

QuadResult patch_v(double xi, const PatchCorrelation& corr, const QuadratureSpec& spec) {
  require_xi(xi, "patch_v");
  const auto cuts = patch_breakpoints(xi);
  auto f = [&](double x) {
    const double g = corr(x * xi);
    if (g == 0.0) return 0.0;
    return x * x / std::expm1(2.0 * x) * g;
  };
  QuadResult r = integrate_improper(f, spec, 0.0, cuts);
  const double scale = -2.0 / pi * xi * xi;
  r.value *= scale;
  r.error *= std::abs(scale);
  return r;
}

QuadResult patch_z(double xi, const PatchCorrelation& corr, const QuadratureSpec& spec) {
  require_xi(xi, "patch_z");
  const auto cuts = patch_breakpoints(xi);
  auto f = [&](double x) {
    const double g = corr(x * xi);
    if (g == 0.0) return 0.0;
    return patch_z_weight(x) * g;
  };
  QuadResult r = integrate_improper(f, spec, 0.0, cuts);
  const double scale = xi * xi / (16.0 * pi);
  r.value *= scale;
  r.error *= scale;
  return r;
}

InteractionKernel kernel_patch(const PatchCorrelation& corr, double V_rms, double ell, double eps0,
                               const QuadratureSpec& spec) {
  if (!std::isfinite(V_rms)) throw DomainError("kernel_patch: V_rms must be finite");
  if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("kernel_patch: ell must be positive");
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw DomainError("kernel_patch: eps0 must be positive");
  corr.require_normalized();
  const double scale = eps0 * V_rms * V_rms;
  Density V = [corr, scale, ell, spec](double psi) {
    return scale / psi * patch_v(ell / psi, corr, spec).value;
  };
  Density Z = [corr, scale, ell, spec](double psi) {
    return scale / psi * patch_z(ell / psi, corr, spec).value;
  };
  return InteractionKernel("patch_" + corr.name(), 2, std::move(V), std::move(Z), {}, std::nullopt,
                           {{"V_rms", V_rms}, {"ell", ell}, {"eps0", eps0}});
}

}  // namespace deforce
