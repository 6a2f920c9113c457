#include "deforce/engine.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "deforce/error.hpp"

namespace deforce {
namespace {

using std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

FunctionalResult make_result(const InteractionKernel& k, const SurfaceProfile& p,
                             const QuadratureSpec& spec) {
  FunctionalResult r;
  r.kernel = k.name();
  r.profile = p.describe();
  r.planform = describe(p.planform());
  r.rho_max = outer_radius(p.planform());
  r.spec = spec;
  return r;
}

}  // namespace

QuadResult integrate_over_profile(const SurfaceProfile& p,
                                  const std::function<double(const ProfileSample&)>& f,
                                  const QuadratureSpec& spec) {
  spec.validate();
  const int n = p.base_dim();
  const std::vector<double> cuts = p.length_scales();
  if (p.axisymmetric() && spec.axisymmetric_reduction && is_radial(p.planform())) {
    auto radial = [&](double rho) {
      std::array<double, 3> x{rho, 0.0, 0.0};
      return f(p.eval(std::span<const double>(x.data(), n)));
    };
    return integrate_radial(radial, outer_radius(p.planform()), n, spec, cuts);
  }
  auto general = [&](std::span<const double> x) { return f(p.eval(x)); };
  return integrate_nd(general, p.planform(), spec, cuts);
}

FunctionalResult eval_pfa(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec) {
  k.check_base_dim(p.base_dim());
  FunctionalResult r = make_result(k, p, spec);
  const QuadResult f0 =
      integrate_over_profile(p, [&](const ProfileSample& s) { return k.V(s.psi); }, spec);
  r.F0 = f0.value;
  r.F0_error = f0.error;
  return r;
}

FunctionalResult eval_de2(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec) {
  FunctionalResult r = eval_pfa(k, p, spec);
  const QuadResult f2 = integrate_over_profile(
      p,
      [&](const ProfileSample& s) {
        const double g2 = s.grad_norm2();
        return g2 == 0.0 ? 0.0 : k.Z(s.psi) * g2;
      },
      spec);
  r.F2 = f2.value;
  r.F2_error = f2.error;
  return r;
}

QuadResult eval_de4_term(const Density& C, const SurfaceProfile& p, const QuadratureSpec& spec) {
  if (!C) throw DomainError("eval_de4_term: fourth-order density C is empty");
  if (!p.has_hessian())
    throw DomainError("eval_de4_term: profile " + p.describe() +
                      " has no Hessian support (grids need at least 4 nodes per axis)");
  QuadResult r = integrate_over_profile(
      p,
      [&](const ProfileSample& s) {
        const double g2 = s.grad_norm2();
        const double shape = g2 * g2 + 2.0 * s.hess_norm2();
        return shape == 0.0 ? 0.0 : C(s.psi) * shape;
      },
      spec);
  r.value *= 0.125;
  r.error *= 0.125;
  return r;
}

FunctionalResult eval_de4(const InteractionKernel& k, const SurfaceProfile& p,
                          const QuadratureSpec& spec) {
  if (!k.has_fourth_order())
    throw DomainError("eval_de4: kernel " + k.name() + " has no fourth-order density");
  FunctionalResult r = eval_de2(k, p, spec);
  const QuadResult f4 = eval_de4_term(k.C_density(), p, spec);
  r.F4 = f4.value;
  r.F4_error = f4.error;
  return r;
}

QuadResult tail_integral(const Density& E, double d, const QuadratureSpec& spec) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("tail_integral: d must be positive");
  spec.validate();
  // Local decay exponent far out; E must fall faster than 1/h.
  const double h1 = d * 1e6, h2 = d * 1e9;
  const double e1 = std::abs(E(h1)), e2 = std::abs(E(h2));
  if (e1 > 0.0 && e2 > 0.0) {
    const double exponent = -std::log(e2 / e1) / std::log(h2 / h1);
    if (!(exponent > 1.05))
      throw NumericalError("tail integral diverges: E(h) decays like h^-" + fmt(exponent) +
                           " (needs a power above 1)");
  } else if (e1 > 0.0 && !(e2 >= 0.0)) {
    throw NumericalError("tail integral: E(h) is not finite at large h");
  }
  // h = d u.
  static constexpr std::array<double, 5> cuts{1.5, 2.0, 4.0, 16.0, 64.0};
  QuadResult r = integrate_interval([&](double u) { return E(d * u); }, 1.0, kInfinity, spec, cuts);
  r.value *= d;
  r.error *= d;
  return r;
}

DerjaguinResult eval_derjaguin(const Density& E, double d, double R1, double R2,
                               const QuadratureSpec& spec) {
  if (!(R1 > 0.0) || !(R2 > 0.0)) throw DomainError("eval_derjaguin: radii must be positive");
  if (!std::isfinite(R1)) throw DomainError("eval_derjaguin: R1 must be finite");
  DerjaguinResult r;
  r.effective_radius = std::isinf(R2) ? R1 : R1 * R2 / (R1 + R2);
  const QuadResult tail = tail_integral(E, d, spec);
  const double factor = 2.0 * pi * r.effective_radius;
  r.energy = factor * tail.value;
  r.energy_error = factor * tail.error;
  r.force = factor * E(d);
  return r;
}

namespace {

void require_shared_planform(const SurfaceProfile& a, const SurfaceProfile& b, const char* who) {
  if (a.base_dim() != b.base_dim() || describe(a.planform()) != describe(b.planform()))
    throw DomainError(std::string(who) + ": sheets must share a planform (" +
                      describe(a.planform()) + " vs " + describe(b.planform()) + ")");
}

}  // namespace

QuadResult eval_sei(const Density& E, const SurfaceProfile& near_sheet,
                    const SurfaceProfile& far_sheet, const QuadratureSpec& spec) {
  require_shared_planform(near_sheet, far_sheet, "eval_sei");
  spec.validate();
  const int n = near_sheet.base_dim();
  auto check = [](double psi1, double psi2, std::span<const double> x) {
    if (psi1 > psi2 * (1.0 + 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "eval_sei: sheet-order violation, psi1 = " << psi1 << " > psi2 = " << psi2 << " at x = (";
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw DomainError(os.str());
    }
  };
  std::vector<double> cuts = near_sheet.length_scales();
  const auto far_cuts = far_sheet.length_scales();
  cuts.insert(cuts.end(), far_cuts.begin(), far_cuts.end());

  if (near_sheet.axisymmetric() && far_sheet.axisymmetric() && spec.axisymmetric_reduction &&
      is_radial(near_sheet.planform())) {
    auto radial = [&](double rho) {
      std::array<double, 3> x{rho, 0.0, 0.0};
      const std::span<const double> pt(x.data(), n);
      const double psi1 = near_sheet.eval(pt).psi, psi2 = far_sheet.eval(pt).psi;
      check(psi1, psi2, pt);
      return E(psi1) - E(psi2);
    };
    return integrate_radial(radial, outer_radius(near_sheet.planform()), n, spec, cuts);
  }
  auto general = [&](std::span<const double> x) {
    const double psi1 = near_sheet.eval(x).psi, psi2 = far_sheet.eval(x).psi;
    check(psi1, psi2, x);
    return E(psi1) - E(psi2);
  };
  return integrate_nd(general, near_sheet.planform(), spec, cuts);
}

Density dilute_parallel_plate(double lambda_R) {
  const double c = lambda_R / (32.0 * pi * pi);
  return [c](double h) { return c / h; };
}

QuadResult dilute_oracle(double lambda_R, const SurfaceProfile& near_sheet,
                         const SurfaceProfile& far_sheet, const QuadratureSpec& spec) {
  require_shared_planform(near_sheet, far_sheet, "dilute_oracle");
  if (!std::isfinite(lambda_R)) throw DomainError("dilute_oracle: lambda_R must be finite");
  auto inverse = [](const ProfileSample& s) { return 1.0 / s.psi; };
  const QuadResult i1 = integrate_over_profile(near_sheet, inverse, spec);
  const QuadResult i2 = integrate_over_profile(far_sheet, inverse, spec);
  const double c = lambda_R / (32.0 * pi * pi);
  return {c * (i1.value - i2.value), std::abs(c) * (i1.error + i2.error),
          i1.evaluations + i2.evaluations};
}

double eval_blocki_force(const Density& E, double J0, double J1, double d,
                         const QuadratureSpec& spec) {
  if (J1 == 0.0) return J0 * E(d);
  return J0 * E(d) - J1 * tail_integral(E, d, spec).value;
}

double eval_blocki_force(const Density& E, const JacobianProfile& jac, const QuadratureSpec& spec) {
  if (jac.degenerate)
    throw DomainError("eval_blocki_force: Jacobian is degenerate (constant gap); no linear fit");
  return eval_blocki_force(E, jac.J0, jac.J1, jac.d, spec);
}

MethodTable compare_methods(const InteractionKernel& k, const SurfaceProfile& p,
                            const QuadratureSpec& spec,
                            const std::optional<SurfaceProfile>& far_sheet,
                            const JacobianOptions& jac_opts) {
  MethodTable t;
  t.kernel = k.name();
  t.profile = p.describe();

  const FunctionalResult de = eval_de2(k, p, spec);
  const double e_de2 = de.total();

  MethodRow pfa{"PFA", de.F0, std::nullopt, de.F0_error, std::nullopt, std::nullopt, ""};
  MethodRow de2{"DE2", e_de2, std::nullopt, de.total_error(), std::nullopt, std::nullopt, ""};
  t.rows.push_back(pfa);
  t.rows.push_back(de2);

  std::optional<double> da_force;
  const double d = p.min_gap();
  if (const auto R = p.curvature_radius(); R && p.base_dim() == 2) {
    const DerjaguinResult da = eval_derjaguin(k.V_density(), d, *R, kInfinity, spec);
    t.rows.push_back({"DA", da.energy, da.force, da.energy_error, std::nullopt, std::nullopt,
                      "R_eff = " + fmt(da.effective_radius)});
    da_force = da.force;
  } else {
    t.rows.push_back({"DA", std::nullopt, std::nullopt, 0.0, std::nullopt, std::nullopt,
                      "not applicable: needs a curvature radius on a two-dimensional base"});
  }

  {
    const JacobianProfile jac = compute_jacobian(p, jac_opts);
    MethodRow row{"Blocki", jacobian_energy(k.V_density(), jac), std::nullopt, 0.0, std::nullopt,
                  std::nullopt, ""};
    if (jac.degenerate) {
      row.note = "degenerate Jacobian (constant gap)";
    } else {
      row.force = eval_blocki_force(k.V_density(), jac, spec);
      row.note = "J0 = " + fmt(jac.J0) + ", J1 = " + fmt(jac.J1);
    }
    t.rows.push_back(row);
  }

  if (far_sheet) {
    const QuadResult sei = eval_sei(k.V_density(), p, *far_sheet, spec);
    t.rows.push_back({"SEI", sei.value, std::nullopt, sei.error, std::nullopt, std::nullopt,
                      "far sheet " + far_sheet->describe()});
  }

  for (MethodRow& row : t.rows) {
    if (row.energy && e_de2 != 0.0) row.energy_ratio = *row.energy / e_de2;
    if (row.force && da_force && *da_force != 0.0) row.force_ratio = *row.force / *da_force;
  }
  return t;
}

}  // namespace deforce
