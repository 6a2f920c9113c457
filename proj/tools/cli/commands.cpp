#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <deforce/error.hpp>

#include "output.hpp"

#ifndef DEFORCE_VERSION
#define DEFORCE_VERSION "unknown"
#endif

namespace deforce::cli {
namespace {

using std::numbers::pi;

const std::vector<std::string> kKnownSections{"schema_version", "profile", "kernel", "quad",
                                              "eval", "gamma", "jacobian", "sei",
                                              "compare", "sweep", "check"};

const json kEmpty = json::object();

/// State shared by one command invocation.
struct Run {
  json doc;
  Section root;
  QuadratureSpec quad;
  std::string out_dir;
  std::vector<std::string> outputs;

  Run(json d, std::string out) : doc(std::move(d)), root(doc, ""), out_dir(std::move(out)) {
    root.integer("schema_version", kSchemaVersion);
    if (root.has("quad")) {
      Section q = root.child("quad");
      quad = parse_quad(q);
      root.put("quad", q.resolved());
    } else {
      Section q(kEmpty, "quad");
      quad = parse_quad(q);
      root.put("quad", q.resolved());
    }
  }

  SurfaceProfile profile(const std::string& key = "profile") {
    Section s = root.child(key);
    SurfaceProfile p = parse_profile(s);
    root.put(key, s.resolved());
    return p;
  }

  InteractionKernel kernel() {
    Section s = root.child("kernel");
    InteractionKernel k = parse_kernel(s, quad);
    root.put("kernel", s.resolved());
    return k;
  }

  /// Named command section; absent sections resolve to their defaults.
  template <typename F>
  auto section(const std::string& key, F&& parse) {
    Section s = root.has(key) ? root.child(key) : Section(kEmpty, key);
    auto value = parse(s);
    root.put(key, s.resolved());
    return value;
  }

  void write(const std::string& name, const std::string& content) {
    write_atomic((std::filesystem::path(out_dir) / name).string(), content);
    outputs.push_back(name);
  }

  /// Echoes known sections the command did not use and rejects the rest.
  json resolved() {
    for (const auto& [key, value] : doc.items()) {
      (void)value;
      if (std::find(kKnownSections.begin(), kKnownSections.end(), key) == kKnownSections.end())
        throw ConfigError(key + ": unknown key");
      if (!root.resolved().contains(key)) root.raw(key);
    }
    root.finish();
    return root.resolved();
  }
};

json envelope(const std::string& command, json result) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"result", std::move(result)}};
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(Run& run, const std::string& command) {
  const json resolved = run.resolved();
  json manifest{{"manifest_version", 1},
                {"tool", "deforce"},
                {"version", DEFORCE_VERSION},
                {"command", command},
                {"timestamp", timestamp()},
                {"config", resolved},
                {"outputs", run.outputs}};
  write_atomic((std::filesystem::path(run.out_dir) / "manifest.json").string(), dump(manifest));
}

std::string num(double v) { return format_number(v); }

// eval ----------------------------------------------------------------------

void cmd_eval(Run& run, std::ostream& out) {
  const SurfaceProfile p = run.profile();
  const InteractionKernel k = run.kernel();
  const int order = run.section("eval", [](Section& s) {
    const int o = s.integer("order", 2);
    s.finish();
    if (o != 0 && o != 2 && o != 4) throw ConfigError("eval.order: expected 0, 2 or 4");
    return o;
  });
  // Validate the whole config before any numerical work.
  run.resolved();
  FunctionalResult r;
  if (order == 0) {
    r = eval_pfa(k, p, run.quad);
  } else if (order == 2) {
    r = eval_de2(k, p, run.quad);
  } else {
    r = eval_de4(k, p, run.quad);
  }
  run.write("eval.json", dump(envelope("eval", to_json(r))));
  out << "F0 = " << num(r.F0) << " +- " << num(r.F0_error) << "\n";
  if (r.F2) out << "F2 = " << num(*r.F2) << " +- " << num(r.F2_error) << "\n";
  if (r.F4) out << "F4 (partial) = " << num(*r.F4) << " +- " << num(r.F4_error) << "\n";
  out << "total = " << num(r.total()) << " +- " << num(r.total_error()) << "\n";
}

// gamma ---------------------------------------------------------------------

void cmd_gamma(Run& run, std::ostream& out) {
  const InteractionKernel k = run.kernel();
  const GammaFitOptions opts = run.section("gamma", [](Section& s) { return parse_gamma(s); });
  run.resolved();
  const FitReport rep = gamma_fit(k, opts, run.quad);
  run.write("gamma.json", dump(envelope("gamma", to_json(rep))));
  CsvTable csv;
  csv.units = "a_over_R dimensionless; ratio = U_DE2 / U_lead dimensionless";
  csv.header = {"a_over_R", "ratio", "ratio_error"};
  for (const LadderPoint& pt : rep.ladder) csv.rows.push_back({pt.x, pt.ratio, pt.ratio_error});
  run.write("gamma_ladder.csv", csv.str());
  out << "gamma = " << num(rep.gamma) << " +- " << num(rep.uncertainty) << "\n";
  if (rep.gamma_log)
    out << "gamma_log = " << num(*rep.gamma_log) << " +- " << num(rep.uncertainty_log.value_or(0.0))
        << "\n";
  if (rep.reference) out << "reference = " << num(*rep.reference) << "\n";
  if (rep.deviation) out << "relative deviation = " << num(*rep.deviation) << "\n";
  out << "rho_M drift (" << num(rep.rho_m_frac) << " R vs " << num(rep.rho_m_frac_alt)
      << " R) = " << num(rep.rho_m_drift_log.value_or(rep.rho_m_drift)) << "\n";
}

// compare -------------------------------------------------------------------

void cmd_compare(Run& run, std::ostream& out) {
  const SurfaceProfile p = run.profile();
  const InteractionKernel k = run.kernel();
  std::optional<SurfaceProfile> far;
  if (run.root.has("compare")) {
    Section s = run.root.child("compare");
    if (s.has("far_profile")) {
      Section fs = s.child("far_profile");
      far = parse_profile(fs);
      s.put("far_profile", fs.resolved());
    }
    s.finish();
    run.root.put("compare", s.resolved());
  }
  const JacobianOptions jo = run.section("jacobian", [](Section& s) { return parse_jacobian(s); });
  run.resolved();
  const MethodTable t = compare_methods(k, p, run.quad, far, jo);
  run.write("compare.json", dump(envelope("compare", to_json(t))));
  for (const MethodRow& r : t.rows) {
    out << r.method << ": energy = " << (r.energy ? num(*r.energy) : "n/a");
    if (r.force) out << ", force = " << num(*r.force);
    if (r.energy_ratio) out << ", energy/DE2 = " << num(*r.energy_ratio);
    if (r.force_ratio) out << ", force/DA = " << num(*r.force_ratio);
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << "\n";
  }
}

// jacobian ------------------------------------------------------------------

void cmd_jacobian(Run& run, std::ostream& out) {
  const SurfaceProfile p = run.profile();
  std::optional<InteractionKernel> k;
  if (run.root.has("kernel")) k = run.kernel();
  const JacobianOptions jo = run.section("jacobian", [](Section& s) { return parse_jacobian(s); });
  run.resolved();
  const JacobianProfile jac = compute_jacobian(p, jo);
  json result{{"jacobian", to_json(jac)}, {"profile", p.describe()}};
  out << "d = " << num(jac.d) << "\n";
  if (jac.degenerate) {
    out << "degenerate Jacobian (constant gap), area " << num(jac.total_area) << "\n";
  } else {
    out << "J0 = " << num(jac.J0) << ", J1 = " << num(jac.J1) << "\n";
  }
  if (k) {
    result["kernel"] = k->name();
    result["energy"] = jacobian_energy(k->V_density(), jac);
    if (!jac.degenerate) {
      const double f = eval_blocki_force(k->V_density(), jac, run.quad);
      result["blocki_force"] = f;
      out << "Blocki force = " << num(f) << "\n";
    }
  }
  run.write("jacobian.json", dump(envelope("jacobian", result)));
}

// sei -----------------------------------------------------------------------

void cmd_sei(Run& run, std::ostream& out) {
  const SurfaceProfile near = run.profile();
  Section s = run.root.child("sei");
  Section fs = s.child("far_profile");
  const SurfaceProfile far = parse_profile(fs);
  s.put("far_profile", fs.resolved());
  const std::optional<double> lambda_R = s.optional_number("lambda_R");
  s.finish();
  run.root.put("sei", s.resolved());
  std::optional<InteractionKernel> k;
  if (run.root.has("kernel")) k = run.kernel();
  if (!k && !lambda_R)
    throw ConfigError("sei: give a kernel or sei.lambda_R for the dilute parallel-plate density");
  if (k && lambda_R) throw ConfigError("sei: give either a kernel or sei.lambda_R, not both");
  run.resolved();

  const Density E = k ? k->V_density() : dilute_parallel_plate(*lambda_R);
  const QuadResult sei = eval_sei(E, near, far, run.quad);
  json result{{"sei", sei.value}, {"sei_error", sei.error}};
  out << "SEI = " << num(sei.value) << " +- " << num(sei.error) << "\n";
  if (lambda_R) {
    const QuadResult oracle = dilute_oracle(*lambda_R, near, far, run.quad);
    const double diff = std::abs(sei.value - oracle.value);
    result["oracle"] = oracle.value;
    result["oracle_error"] = oracle.error;
    result["difference"] = diff;
    result["within_error"] = diff <= sei.error + oracle.error;
    out << "dilute oracle = " << num(oracle.value) << " +- " << num(oracle.error) << "\n";
  }
  run.write("sei.json", dump(envelope("sei", result)));
}

// sweep ---------------------------------------------------------------------

struct SweepOptions {
  Family family = Family::sphere;
  double R = 1.0;
  std::vector<double> a_over_R;
  double rho_m_frac = 0.9;
};

void cmd_sweep(Run& run, std::ostream& out) {
  const InteractionKernel k = run.kernel();
  const SweepOptions o = run.section("sweep", [](Section& s) {
    SweepOptions o;
    const std::string family = s.string("family", "sphere");
    if (family != "sphere" && family != "cylinder")
      throw ConfigError("sweep.family: expected sphere or cylinder");
    o.family = family == "sphere" ? Family::sphere : Family::cylinder;
    o.R = s.number("R", 1.0);
    o.a_over_R = s.numbers("a_over_R", {1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2});
    o.rho_m_frac = s.number("rho_m_frac", 0.9);
    s.finish();
    if (o.a_over_R.empty()) throw ConfigError("sweep.a_over_R: needs at least one value");
    return o;
  });
  run.resolved();
  const int n = o.family == Family::cylinder ? 1 : (k.plane_dim() == 0 ? 2 : k.plane_dim());
  CsvTable csv;
  csv.units = "a_over_R dimensionless; F0, F2, total, err in kernel energy units" +
              std::string(o.family == Family::cylinder ? " per unit length" : "") +
              "; ratio_to_lead dimensionless";
  csv.header = {"a_over_R", "F0", "F2", "total", "err", "ratio_to_lead"};
  for (double x : o.a_over_R) {
    const double a = x * o.R, rho = o.rho_m_frac * o.R;
    const SurfaceProfile p = [&] {
      try {
        return o.family == Family::sphere ? make_sphere(a, o.R, rho, n) : make_cylinder(a, o.R, rho);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
      }
    }();
    const FunctionalResult r = eval_de2(k, p, run.quad);
    double ratio = std::nan("");
    if (k.power_law()) ratio = r.total() / leading_reference(*k.power_law(), n, a, o.R);
    csv.rows.push_back({x, r.F0, r.F2.value_or(0.0), r.total(), r.total_error(), ratio});
  }
  run.write("sweep.csv", csv.str());
  out << "wrote " << csv.rows.size() << " rows to sweep.csv\n";
}

// check ---------------------------------------------------------------------

struct SuiteResult {
  bool passed = true;
  std::string detail;
  json data = json::object();
};

bool close(double value, double expected, double rel) {
  return std::abs(value / expected - 1.0) <= rel;
}

SuiteResult suite_closed_form(const QuadratureSpec& q) {
  const SurfaceProfile p = make_paraboloid(1.0, 10.0);
  const FunctionalResult r = eval_de2(kernel_power_law(1.0, 1.0, 3.0), p, q);
  const double f0 = pi / 2.0 * 100.0, f2 = 2.0 * pi;
  SuiteResult s;
  s.passed = close(r.F0, f0, 1e-8) && close(*r.F2, f2, 1e-8);
  s.detail = "paraboloid F0 = " + num(r.F0) + " (" + num(f0) + "), F2 = " + num(*r.F2) + " (" +
             num(f2) + ")";
  s.data = to_json(r);
  return s;
}

SuiteResult suite_scaling(const QuadratureSpec& q) {
  const InteractionKernel k = kernel_power_law(1.0, 1.0, 3.0, 1.0);
  SuiteResult s;
  s.data = json::array();
  std::vector<std::string> worst;
  for (const SurfaceProfile& p : {make_paraboloid(1.0, 10.0, 50.0), make_gaussian_bump(1.0, -0.5, 2.0, 6.0)}) {
    const ScalingReport rep = scaling_check(k, p, {0.5, 2.0, 4.0}, q);
    s.passed = s.passed && rep.passed;
    s.data.push_back(to_json(rep));
    worst.push_back(p.describe() + ": max violation " + num(rep.max_violation));
  }
  for (const auto& w : worst) s.detail += (s.detail.empty() ? "" : "; ") + w;
  return s;
}

SuiteResult suite_additivity(const QuadratureSpec& q, const InteractionKernel& em) {
  const AdditivityReport rep =
      em_additivity_check({make_sphere(1e-3, 1.0, 0.9), make_constant(1.0, Disk{1.0})}, q, 1e-9, em);
  SuiteResult s;
  s.passed = rep.passed;
  s.detail = "max relative mismatch " + num(rep.max_relative) + " with kernel " + em.name();
  s.data = to_json(rep);
  return s;
}

/// Random two-sheet bodies: full spheres and Gaussian bumps under a lid.
std::vector<std::pair<SurfaceProfile, SurfaceProfile>> random_bodies(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<SurfaceProfile, SurfaceProfile>> bodies;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      const double R = 1.0 + 9.0 * unit(rng), a = 0.01 + unit(rng), f = 0.5 + 0.45 * unit(rng);
      bodies.emplace_back(make_sphere(a, R, f * R, 2, SphereSheet::near),
                          make_sphere(a, R, f * R, 2, SphereSheet::far));
    } else {
      const double h = 0.5 + unit(rng), amp = -0.4 * h * unit(rng), w = 0.5 + 2.0 * unit(rng);
      const double rho = 1.0 + 4.0 * unit(rng), lid = h + 0.1 + 2.0 * unit(rng);
      bodies.emplace_back(make_gaussian_bump(h, amp, w, rho), make_constant(lid, Disk{rho}));
    }
  }
  return bodies;
}

SuiteResult suite_sei(const QuadratureSpec& q, std::uint64_t seed) {
  SuiteResult s;
  const Density E = dilute_parallel_plate(1.0);
  double worst = 0.0;
  for (const auto& [near, far] : random_bodies(seed, 20)) {
    const QuadResult sei = eval_sei(E, near, far, q);
    const QuadResult oracle = dilute_oracle(1.0, near, far, q);
    const double diff = std::abs(sei.value - oracle.value), tol = sei.error + oracle.error;
    worst = std::max(worst, tol > 0.0 ? diff / tol : diff);
    if (diff > tol) s.passed = false;
  }
  const QuadResult slab =
      eval_sei(E, make_constant(1.0, Rectangle{}), make_constant(2.0, Rectangle{}), q);
  const double exact = 1.0 / (64.0 * pi * pi);
  s.passed = s.passed && close(slab.value, exact, 1e-12);
  s.detail = "20 random bodies, worst |SEI - oracle| / combined error = " + num(worst) +
             "; slab = " + num(slab.value) + " (" + num(exact) + ")";
  s.data = {{"worst_ratio_to_error", worst}, {"slab", slab.value}, {"slab_exact", exact}};
  return s;
}

SuiteResult suite_jacobian(const QuadratureSpec& q) {
  const double R = 100.0, a = 1.0;
  const JacobianProfile jac = compute_jacobian(make_sphere(a, R, 0.9 * R));
  double worst = 0.0;
  for (std::size_t i = 0; i < jac.values.size(); ++i)
    worst = std::max(worst, std::abs(jac.values[i] / (2.0 * pi * (R + a - jac.centers[i])) - 1.0));
  const double force = eval_blocki_force(kernel_casimir_scalar(Boundary::dirichlet).V_density(), jac, q);
  const double exact = -std::pow(pi, 3) * R / 720.0 - std::pow(pi, 3) / 1440.0;
  SuiteResult s;
  s.passed = worst < 5e-3 && close(jac.J0, 2.0 * pi * R, 1e-2) && close(jac.J1, -2.0 * pi, 1e-2) &&
             close(force, exact, 1e-6);
  s.detail = "max bin error " + num(worst) + ", J0 = " + num(jac.J0) + ", J1 = " + num(jac.J1) +
             ", force = " + num(force) + " (" + num(exact) + ")";
  s.data = to_json(jac);
  return s;
}

SuiteResult suite_patch(const QuadratureSpec& q) {
  const PatchCorrelation g = PatchCorrelation::gaussian();
  const double zeta3 = std::riemann_zeta(3.0), xi = 1e-3;
  const double v = patch_v(xi, g, q).value, z = patch_z(xi, g, q).value;
  const double v_lim = -g.at_origin() * zeta3 * xi * xi / (2.0 * pi);
  const double z_lim = -g.at_origin() * (1.0 + 6.0 * zeta3) * xi * xi / (24.0 * pi);
  const double v_large = patch_v(1e3, g, q).value;
  SuiteResult s;
  s.passed = close(v, v_lim, 1e-3) && close(z, z_lim, 1e-3) && v_large >= -2.01 && v_large <= -1.99;
  s.detail = "v(1e-3)/limit = " + num(v / v_lim) + ", z(1e-3)/limit = " + num(z / z_lim) +
             ", v(1e3) = " + num(v_large);
  s.data = {{"v_small", v}, {"z_small", z}, {"v_large", v_large}};
  return s;
}

SuiteResult suite_gamma(const QuadratureSpec& q) {
  const FitReport rep = gamma_fit(kernel_casimir_scalar(Boundary::dirichlet), {}, q);
  SuiteResult s;
  s.passed = close(rep.gamma, 1.0 / 3.0, 1e-2);
  s.detail = "Dirichlet sphere gamma = " + num(rep.gamma) + " (1/3)";
  s.data = to_json(rep);
  return s;
}

int cmd_check(Run& run, const std::vector<std::string>& cli_suites, std::ostream& out,
              std::ostream& err) {
  std::vector<std::string> suites;
  std::optional<InteractionKernel> em;
  std::uint64_t seed = 20240611;
  {
    Section s = run.root.has("check") ? run.root.child("check") : Section(kEmpty, "check");
    suites = s.strings("suites", suite_names());
    seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<int>(seed)));
    if (s.has("em_kernel")) {
      Section ks = s.child("em_kernel");
      em = parse_kernel(ks, run.quad);
      s.put("em_kernel", ks.resolved());
    }
    s.finish();
    if (!cli_suites.empty()) {
      suites = cli_suites;
      s.put("suites", suites);
    }
    run.root.put("check", s.resolved());
  }
  for (const std::string& name : suites)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw ConfigError("check.suites: unknown suite '" + name + "'");
  run.resolved();

  json report = json::object();
  std::vector<std::string> failed;
  for (const std::string& name : suites) {
    SuiteResult r;
    if (name == "closed_form") r = suite_closed_form(run.quad);
    if (name == "scaling") r = suite_scaling(run.quad);
    if (name == "additivity") r = suite_additivity(run.quad, em ? *em : kernel_casimir_em());
    if (name == "sei") r = suite_sei(run.quad, seed);
    if (name == "jacobian") r = suite_jacobian(run.quad);
    if (name == "patch") r = suite_patch(run.quad);
    if (name == "gamma") r = suite_gamma(run.quad);
    out << (r.passed ? "PASS " : "FAIL ") << name << ": " << r.detail << "\n";
    report[name] = {{"passed", r.passed}, {"detail", r.detail}, {"data", r.data}};
    if (!r.passed) failed.push_back(name);
  }
  report["passed"] = failed.empty();
  run.write("check.json", dump(envelope("check", report)));
  if (!failed.empty()) {
    std::string list;
    for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
    err << "check failed: " << list << "\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"eval", "gamma", "check", "compare",
                                              "jacobian", "sei", "sweep"};
  return names;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"closed_form", "scaling", "additivity", "sei",
                                              "jacobian", "patch", "gamma"};
  return names;
}

int run(const std::string& command, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    json doc = json::object();
    if (opts.config_path) {
      doc = load_config(*opts.config_path);
    } else if (command != "check") {
      throw ConfigError(command + ": --config is required");
    }
    doc = normalize_config(std::move(doc), opts.overrides);
    Run r(std::move(doc), opts.out_dir);
    int code = kOk;
    if (command == "eval") {
      cmd_eval(r, out);
    } else if (command == "gamma") {
      cmd_gamma(r, out);
    } else if (command == "compare") {
      cmd_compare(r, out);
    } else if (command == "jacobian") {
      cmd_jacobian(r, out);
    } else if (command == "sei") {
      cmd_sei(r, out);
    } else if (command == "sweep") {
      cmd_sweep(r, out);
    } else if (command == "check") {
      code = cmd_check(r, opts.suites, out, err);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    write_manifest(r, command);
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << num(e.estimate())
        << ", error " << num(e.error()) << ")\n";
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace deforce::cli
