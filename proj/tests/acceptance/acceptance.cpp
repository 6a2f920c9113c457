// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <cli/commands.hpp>
#include <cmath>
#include <deforce/analysis.hpp>
#include <deforce/engine.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"

using namespace deforce;
namespace fs = std::filesystem;

namespace {

constexpr double pi = oracle::pi;
const double zeta3 = std::riemann_zeta(3.0);

// Tolerances.
constexpr double kClosedForm = 1e-8;
constexpr double kScaling = 1e-6;
constexpr double kGamma = 1e-2;
constexpr double kAdditivity = 1e-9;
constexpr double kHighTLead = 5e-3;
constexpr double kHighTLog = 2e-2;
constexpr double kHighTDrift = 2e-2;
constexpr double kPatchSmall = 1e-3;
constexpr double kPatchLarge = 5e-3;
constexpr double kBracket = 1e-6;
constexpr double kJacobianBin = 5e-3;
constexpr double kJacobianFit = 1e-2;
constexpr double kBlocki = 1e-6;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(7) << v;
  return os.str();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [failed]");
  }
  // |value / expected - 1| <= tol.
  void rel(const std::string& name, double value, double expected, double tol) {
    const double dev = std::abs(value / expected - 1.0);
    require(dev <= tol, name + " = " + num(value) + " vs " + num(expected) + " (rel " + num(dev) +
                            " <= " + num(tol) + ")");
  }
};

Check c1_paraboloid() {
  Check c;
  const double a = 1.0, sigma = 10.0;
  const auto r = eval_de2(kernel_power_law(1.0, 1.0, 3.0), make_paraboloid(a, sigma));
  c.rel("F0", r.F0, pi / 2.0 * sigma * sigma / (a * a * a), kClosedForm);
  c.rel("F2", *r.F2, 2.0 * pi / a, kClosedForm);
  return c;
}

Check c2_scaling() {
  Check c;
  // F4 on the unbounded paraboloid diverges logarithmically, so the
  // planform is finite.
  const auto k = kernel_power_law(1.0, 1.0, 3.0, 1.0);
  const std::vector<double> lambdas{0.5, 2.0, 4.0};
  for (const auto& [name, p] :
       std::vector<std::pair<std::string, SurfaceProfile>>{
           {"paraboloid", make_paraboloid(1.0, 10.0, 50.0)},
           {"gaussian bump", make_gaussian_bump(1.0, -0.5, 1.0, 3.0)}}) {
    const ScalingReport rep = scaling_check(k, p, lambdas, {}, kScaling);
    bool all_orders = rep.entries.size() == 3 * lambdas.size();
    c.require(rep.passed && all_orders,
              name + " max violation " + num(rep.max_violation) + " <= " + num(kScaling) + " over " +
                  std::to_string(rep.entries.size()) + " (order, lambda) pairs");
  }
  return c;
}

Check c3_sphere() {
  Check c;
  GammaFitOptions o;
  o.family = Family::sphere;
  const auto d = gamma_fit(kernel_casimir_scalar(Boundary::dirichlet), o);
  const auto n = gamma_fit(kernel_casimir_scalar(Boundary::neumann), o);
  c.rel("gamma_D", d.gamma, 1.0 / 3.0, kGamma);
  c.rel("gamma_N", n.gamma, 1.0 / 3.0 - 40.0 / (pi * pi), kGamma);
  const std::vector<SurfaceProfile> profiles{make_sphere(1e-3, 1.0, 0.9), make_sphere(1e-2, 1.0, 0.9),
                                             make_constant(1.0, Disk{1.0}),
                                             make_gaussian_bump(1.0, -0.3, 0.8, 3.0)};
  const auto add = em_additivity_check(profiles, {}, kAdditivity);
  c.require(add.passed, "EM additivity max rel " + num(add.max_relative) + " <= " + num(kAdditivity));
  return c;
}

Check c4_cylinder() {
  Check c;
  GammaFitOptions o;
  o.family = Family::cylinder;
  const auto d = gamma_fit(kernel_casimir_scalar(Boundary::dirichlet), o);
  const auto n = gamma_fit(kernel_casimir_scalar(Boundary::neumann), o);
  c.rel("gamma_D", d.gamma, 7.0 / 36.0, kGamma);
  c.rel("gamma_N", n.gamma, 7.0 / 36.0 - 40.0 / (3.0 * pi * pi), kGamma);
  return c;
}

Check c5_highT_sphere() {
  Check c;
  const double beta = 1.0, R = 1.0;
  GammaFitOptions o;
  o.R = R;
  const auto k = kernel_highT_dirichlet(beta, 2);
  const auto r = gamma_fit_log(k, o);
  // Leading term at the smallest rung against -zeta(3) R / (8 beta a).
  const LadderPoint& smallest = r.ladder.back();
  const double a = smallest.x * R;
  c.rel("U / (-zeta(3) R / 8 beta a) at a/R = " + num(smallest.x), smallest.energy,
        -zeta3 * R / (8.0 * beta * a), kHighTLead);
  c.rel("gamma_log", *r.gamma_log, -1.0 / (6.0 * zeta3), kHighTLog);
  c.require(*r.rho_m_drift_log < kHighTDrift, "gamma_log drift 0.9R vs 0.7R = " +
                                                  num(*r.rho_m_drift_log) + " < " + num(kHighTDrift));
  return c;
}

Check c6_highT_d4() {
  Check c;
  GammaFitOptions o;
  const auto r = gamma_fit(kernel_highT_dirichlet(1.0, 3), o);
  c.rel("slope", r.gamma, 0.25, kGamma);
  c.require(true, "d = 5 ratio not gated (needs b2 in four dimensions)");
  return c;
}

Check c7_patch() {
  Check c;
  const auto g = PatchCorrelation::gaussian();
  const double xi = 1e-3;
  c.rel("v(1e-3)", patch_v(xi, g).value, -g.at_origin() * zeta3 * xi * xi / (2.0 * pi), kPatchSmall);
  c.rel("z(1e-3)", patch_z(xi, g).value, -g.at_origin() * (1.0 + 6.0 * zeta3) * xi * xi / (24.0 * pi),
        kPatchSmall);
  c.rel("v(1e3)", patch_v(1e3, g).value, -2.0, kPatchLarge);
  const auto one = PatchCorrelation::custom("one", [](double) { return 1.0; });
  const double bracket = patch_z(1.0, one).value * 16.0 * pi;
  c.rel("bracket", bracket, -2.0 / 3.0 * (1.0 + 6.0 * zeta3), kBracket);
  return c;
}

// Near / far sheets sharing a planform.
std::vector<std::pair<SurfaceProfile, SurfaceProfile>> random_bodies(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<SurfaceProfile, SurfaceProfile>> out;
  for (int i = 0; i < count; ++i) {
    switch (i % 3) {
      case 0: {
        const double R = 0.5 + 2.0 * u(rng), a = R * (0.01 + 0.5 * u(rng)), f = 0.3 + 0.65 * u(rng);
        out.emplace_back(make_sphere(a, R, f * R), make_sphere(a, R, f * R, 2, SphereSheet::far));
        break;
      }
      case 1: {
        const double a = 0.1 + u(rng), s = 0.5 + 2.0 * u(rng), rho = 0.5 + 3.0 * u(rng);
        out.emplace_back(make_paraboloid(a, s, rho), make_paraboloid(a * (1.5 + u(rng)), s, rho));
        break;
      }
      default: {
        const double h = 0.5 + u(rng), amp = -0.4 * h * u(rng), w = 0.3 + u(rng), rho = 1.0 + 2.0 * u(rng);
        out.emplace_back(make_gaussian_bump(h, amp, w, rho),
                         make_gaussian_bump(h + 1.0 + u(rng), 0.5 * u(rng), w, rho));
        break;
      }
    }
  }
  return out;
}

Check c8_sei() {
  Check c;
  const double lambda = 1.0;
  const Density E = dilute_parallel_plate(lambda);
  double worst = 0.0;
  bool ok = true;
  for (const auto& [near, far] : random_bodies(7, 20)) {
    const auto s = eval_sei(E, near, far);
    const auto o = dilute_oracle(lambda, near, far);
    const double diff = std::abs(s.value - o.value), tol = s.error + o.error;
    ok = ok && diff <= tol;
    worst = std::max(worst, tol > 0.0 ? diff / tol : (diff == 0.0 ? 0.0 : INFINITY));
  }
  c.require(ok, "20 bodies, worst |SEI - oracle| / combined error = " + num(worst) + " <= 1");
  const auto slab = eval_sei(E, make_constant(1.0, Rectangle{}), make_constant(2.0, Rectangle{}));
  c.rel("constant sheets", slab.value, lambda / (64.0 * pi * pi), 1e-14);
  return c;
}

Check c9_blocki() {
  Check c;
  const double R = 100.0, a = 1.0;
  const auto jac = compute_jacobian(make_sphere(a, R, 0.9 * R));
  double worst = 0.0;
  for (std::size_t i = 0; i < jac.values.size(); ++i)
    worst = std::max(worst, std::abs(jac.values[i] / (2.0 * pi * (R + a - jac.centers[i])) - 1.0));
  c.require(worst < kJacobianBin, "max bin error " + num(worst) + " < " + num(kJacobianBin));
  c.rel("J0", jac.J0, 2.0 * pi * R, kJacobianFit);
  c.rel("J1", jac.J1, -2.0 * pi, kJacobianFit);
  const double d = 1.0;
  const Density E = kernel_casimir_scalar(Boundary::dirichlet).V_density();
  const double f = eval_blocki_force(E, 2.0 * pi * R, -2.0 * pi, d);
  c.rel("force", f, -std::pow(pi, 3) * R / (720.0 * d * d * d) - std::pow(pi, 3) / (1440.0 * d * d), kBlocki);
  return c;
}

Check c10_electrostatic() {
  Check c;
  const auto k = kernel_electrostatic(1.0, 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logpsi(std::log(1e-4), std::log(1e4));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double psi = std::exp(logpsi(rng));
    worst = std::max(worst, std::abs(3.0 * k.Z(psi) / k.V(psi) - 1.0));
  }
  c.require(worst <= 4.0 * std::numeric_limits<double>::epsilon(),
            "max |3 Z/V - 1| over 1000 gaps = " + num(worst));
  // The 1/psi integrals depend on the planform, which is therefore fixed.
  const double a = 1.0, sigma = 10.0, rho_max = 30.0, cst = 0.5;
  const double U = rho_max * rho_max / (sigma * sigma);
  const auto r = eval_de2(k, make_paraboloid(a, sigma, rho_max));
  c.rel("F0", r.F0, cst * pi * sigma * sigma / a * std::log1p(U), kClosedForm);
  c.rel("F2", *r.F2, cst / 3.0 * 2.0 * pi * 2.0 * a * (U - std::log1p(U)), kClosedForm);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// A value with its reported error, evaluated at a given quadrature spec.
struct Tracked {
  std::string name;
  std::function<std::pair<double, double>(const QuadratureSpec&)> eval;
};

Check c11_determinism() {
  Check c;
  const fs::path root = fs::temp_directory_path() / ("deforce_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path configs(DEFORCE_CONFIG_DIR);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"eval", "paraboloid_eval.json"},     {"gamma", "sphere_neumann_gamma.json"},
      {"gamma", "highT_sphere_log.json"},   {"compare", "sphere_compare.json"},
      {"jacobian", "sphere_jacobian.json"}, {"sei", "dilute_sei.json"},
      {"sweep", "em_sphere_sweep.json"},    {"check", ""}};
  int files = 0;
  bool identical = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      cli::RunOptions opts;
      if (!runs[i].second.empty()) opts.config_path = (configs / runs[i].second).string();
      opts.out_dir = (root / (std::to_string(i) + "_" + std::to_string(rep))).string();
      std::ostringstream out, err;
      const int code = cli::run(runs[i].first, opts, out, err);
      if (code != cli::kOk) {
        c.require(false, runs[i].first + " exited with " + std::to_string(code) + ": " + err.str());
        return c;
      }
      dirs.emplace_back(opts.out_dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string name = entry.path().filename().string();
      if (name == "manifest.json") continue;  // carries the timestamp
      ++files;
      identical = identical && slurp(entry.path()) == slurp(dirs[1] / name);
    }
  }
  fs::remove_all(root);
  c.require(identical && files > 0, std::to_string(files) + " output files byte-identical across runs");

  const auto g = PatchCorrelation::gaussian();
  auto fit = [](const InteractionKernel& k, Family f, bool log) {
    return [k, f, log](const QuadratureSpec& q) {
      GammaFitOptions o;
      o.family = f;
      o.model = log ? FitModel::log : FitModel::linear;
      const auto r = gamma_fit(k, o, q);
      return log ? std::make_pair(*r.gamma_log, *r.uncertainty_log) : std::make_pair(r.gamma, r.uncertainty);
    };
  };
  const std::vector<Tracked> tracked{
      {"paraboloid F0",
       [](const QuadratureSpec& q) {
         const auto r = eval_de2(kernel_power_law(1.0, 1.0, 3.0), make_paraboloid(1.0, 10.0), q);
         return std::make_pair(r.F0, r.F0_error);
       }},
      {"paraboloid F2",
       [](const QuadratureSpec& q) {
         const auto r = eval_de2(kernel_power_law(1.0, 1.0, 3.0), make_paraboloid(1.0, 10.0), q);
         return std::make_pair(*r.F2, r.F2_error);
       }},
      {"electrostatic F0",
       [](const QuadratureSpec& q) {
         const auto r = eval_de2(kernel_electrostatic(1.0, 1.0), make_paraboloid(1.0, 10.0, 30.0), q);
         return std::make_pair(r.F0, r.F0_error);
       }},
      {"electrostatic F2",
       [](const QuadratureSpec& q) {
         const auto r = eval_de2(kernel_electrostatic(1.0, 1.0), make_paraboloid(1.0, 10.0, 30.0), q);
         return std::make_pair(*r.F2, r.F2_error);
       }},
      {"gamma_D sphere", fit(kernel_casimir_scalar(Boundary::dirichlet), Family::sphere, false)},
      {"gamma_N sphere", fit(kernel_casimir_scalar(Boundary::neumann), Family::sphere, false)},
      {"gamma_D cylinder", fit(kernel_casimir_scalar(Boundary::dirichlet), Family::cylinder, false)},
      {"gamma_N cylinder", fit(kernel_casimir_scalar(Boundary::neumann), Family::cylinder, false)},
      {"gamma_log high T", fit(kernel_highT_dirichlet(1.0, 2), Family::sphere, true)},
      {"gamma d = 4", fit(kernel_highT_dirichlet(1.0, 3), Family::sphere, false)},
      {"v(1e-3)",
       [g](const QuadratureSpec& q) {
         const auto r = patch_v(1e-3, g, q);
         return std::make_pair(r.value, r.error);
       }},
      {"z(1e-3)",
       [g](const QuadratureSpec& q) {
         const auto r = patch_z(1e-3, g, q);
         return std::make_pair(r.value, r.error);
       }},
      {"v(1e3)",
       [g](const QuadratureSpec& q) {
         const auto r = patch_v(1e3, g, q);
         return std::make_pair(r.value, r.error);
       }},
      {"SEI sphere",
       [](const QuadratureSpec& q) {
         const auto r = eval_sei(dilute_parallel_plate(1.0), make_sphere(0.1, 1.0, 0.9),
                                 make_sphere(0.1, 1.0, 0.9, 2, SphereSheet::far), q);
         return std::make_pair(r.value, r.error);
       }},
  };
  const QuadratureSpec base;
  const QuadratureSpec half = base.tightened(0.5);
  std::string worst_name;
  double worst = 0.0;
  bool moved_ok = true;
  for (const Tracked& t : tracked) {
    const auto [v1, e1] = t.eval(base);
    const auto [v2, e2] = t.eval(half);
    (void)e2;
    const double moved = std::abs(v2 - v1);
    const bool ok = moved == 0.0 || moved < e1;
    moved_ok = moved_ok && ok;
    const double r = e1 > 0.0 ? moved / e1 : (moved == 0.0 ? 0.0 : INFINITY);
    if (r >= worst) {
      worst = r;
      worst_name = t.name;
    }
  }
  c.require(moved_ok, std::to_string(tracked.size()) +
                          " values move by less than their error at half tolerance (worst: " + worst_name +
                          ", shift / error = " + num(worst) + ")");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    Check (*run)();
  };
  const Criterion criteria[] = {
      {"paraboloid closed forms", c1_paraboloid},
      {"scaling laws", c2_scaling},
      {"sphere-plane Casimir NTLO and EM additivity", c3_sphere},
      {"cylinder-plane Casimir NTLO", c4_cylinder},
      {"high-T Dirichlet sphere, d = 3", c5_highT_sphere},
      {"high-T Dirichlet sphere, d = 4", c6_highT_d4},
      {"patch-potential kernels", c7_patch},
      {"SEI exactness at first order", c8_sei},
      {"Blocki Jacobian", c9_blocki},
      {"electrostatic kernel", c10_electrostatic},
      {"determinism and convergence", c11_determinism},
  };
  int failed = 0, index = 0;
  for (const Criterion& cr : criteria) {
    ++index;
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << index << "] " << cr.title << ": " << c.detail << "\n";
  }
  std::cout << (failed == 0 ? "all 11 criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
