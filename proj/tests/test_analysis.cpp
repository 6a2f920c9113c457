#include <doctest.h>

#include <cmath>
#include <deforce/analysis.hpp>
#include <deforce/error.hpp>

#include "oracles.hpp"

using namespace deforce;
using oracle::pi;

namespace {

const double zeta3 = std::riemann_zeta(3.0);
const double gamma_dirichlet = 1.0 / 3.0;
const double gamma_neumann = 1.0 / 3.0 - 40.0 / (pi * pi);
const double gamma_cyl_dirichlet = 7.0 / 36.0;
const double gamma_cyl_neumann = 7.0 / 36.0 - 40.0 / (3.0 * pi * pi);

GammaFitOptions options(Family f) {
  GammaFitOptions o;
  o.family = f;
  return o;
}

}  // namespace

TEST_CASE("analytic coefficients") {
  const auto bD = casimir_coefficients(Boundary::dirichlet);
  const auto bN = casimir_coefficients(Boundary::neumann);
  CHECK(analytic_gamma(3.0, 2, bD.beta / bD.alpha) == doctest::Approx(gamma_dirichlet).scale(0).epsilon(1e-14));
  CHECK(analytic_gamma(3.0, 2, bN.beta / bN.alpha) == doctest::Approx(gamma_neumann).scale(0).epsilon(1e-14));
  CHECK(gamma_neumann == doctest::Approx(-3.71952).scale(0).epsilon(1e-5));
  CHECK(analytic_gamma(3.0, 1, bD.beta) == doctest::Approx(gamma_cyl_dirichlet).scale(0).epsilon(1e-14));
  CHECK(analytic_gamma(3.0, 1, bN.beta) == doctest::Approx(gamma_cyl_neumann).scale(0).epsilon(1e-14));
  CHECK(analytic_gamma(3.0, 3, bD.beta) == doctest::Approx(0.25).scale(0).epsilon(1e-14));

  const double b_highT = (1.0 + 6.0 * zeta3) / (12.0 * zeta3);
  CHECK(analytic_gamma_log(2.0, 2, b_highT) == doctest::Approx(-1.0 / (6.0 * zeta3)).scale(0).epsilon(1e-14));
  CHECK(analytic_gamma_log(3.0, 2, 0.5) == 0.0);
  CHECK_THROWS_AS(analytic_gamma(2.0, 2, b_highT), DomainError);
}

TEST_CASE("leading reference equals the osculating paraboloid integral") {
  // \int v0 / psi^p over the plane with psi = a + rho^2 / 2R.
  for (double p : {2.0, 3.0, 4.5}) {
    const PowerLaw law{1.3, 0.0, p, std::nullopt};
    const double a = 0.02, R = 3.0;
    const double rho_max = 1e5;
    const long double direct = oracle::simpson_geometric(
        [&](long double rho) { return 2 * oracle::pi * rho * 1.3L * std::pow(a + rho * rho / (2 * R), -p); },
        1e-9L, rho_max, 100, 2000);
    CHECK(oracle::rel(leading_reference(law, 2, a, R), static_cast<double>(direct)) < 1e-6);
  }
  // High temperature: -zeta(3) R / (8 beta a).
  const auto k = kernel_highT_dirichlet(2.0, 2);
  CHECK(leading_reference(*k.power_law(), 2, 0.01, 1.0) ==
        doctest::Approx(-zeta3 * 1.0 / (8.0 * 2.0 * 0.01)).scale(0).epsilon(1e-14));
  CHECK_THROWS_AS(leading_reference(PowerLaw{1.0, 0.0, 1.0, std::nullopt}, 2, 1.0, 1.0), DomainError);
}

TEST_CASE("fit terms") {
  const auto t = fit_terms(FitModel::linear, 3.0, 2, 2.5);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == FitTerm{1.0, false});
  CHECK(t[1] == FitTerm{2.0, false});
  CHECK(t[2] == FitTerm{2.0, true});

  const auto cyl = fit_terms(FitModel::linear, 3.0, 1, 2.5);
  REQUIRE(cyl.size() == 3);
  CHECK(cyl[1] == FitTerm{2.0, false});
  CHECK(cyl[2] == FitTerm{2.5, false});

  const auto log = fit_terms(FitModel::log, 2.0, 2, 2.5);
  REQUIRE(log.size() == 4);
  CHECK(log[1] == FitTerm{1.0, true});
  CHECK(log[2] == FitTerm{2.0, false});
  CHECK(log[3] == FitTerm{2.0, true});

  CHECK_THROWS_AS(fit_terms(FitModel::linear, 2.0, 2, 2.5), DomainError);
  CHECK_THROWS_AS(fit_terms(FitModel::linear, 1.5, 2, 2.5), DomainError);
  CHECK(FitTerm{2.0, true}(0.5) == doctest::Approx(0.25 * std::log(0.5)).scale(0).epsilon(1e-15));
}

TEST_CASE("least squares recovers exact synthetic coefficients") {
  std::vector<LadderPoint> pts;
  for (double x : {8e-3, 4e-3, 2e-3, 1e-3, 5e-4}) {
    LadderPoint p;
    p.x = x;
    p.ratio = 1.0 + 0.3 * x - 2.0 * x * std::log(x) + 5.0 * x * x;
    p.ratio_error = 1e-12;
    pts.push_back(p);
  }
  const auto s = solve_fit(pts, {{1.0, false}, {1.0, true}, {2.0, false}});
  CHECK(s.coefficients(0) == doctest::Approx(0.3).scale(0).epsilon(1e-8));
  CHECK(s.coefficients(1) == doctest::Approx(-2.0).scale(0).epsilon(1e-9));
  CHECK(s.coefficients(2) == doctest::Approx(5.0).scale(0).epsilon(1e-6));
  CHECK(s.residual_max < 1e-14);
  CHECK(s.covariance.rows() == 3);
  CHECK(s.covariance(0, 0) > 0.0);
  // More terms than points: trailing terms are dropped.
  const std::vector<LadderPoint> two(pts.begin(), pts.begin() + 2);
  CHECK(solve_fit(two, {{1.0, false}, {2.0, false}, {3.0, false}}).terms.size() == 2);
}

TEST_CASE("sphere-plane Casimir coefficients") {
  const auto d = gamma_fit(kernel_casimir_scalar(Boundary::dirichlet), options(Family::sphere));
  CHECK(oracle::rel(d.gamma, gamma_dirichlet) < 1e-2);
  CHECK(d.deviation.value() < 1e-2);
  CHECK(d.residual_max <= d.fit_tolerance);
  CHECK(d.uncertainty > 0.0);
  for (std::size_t i = 1; i < d.ladder.size(); ++i) CHECK(d.ladder[i].x < d.ladder[i - 1].x);

  const auto n = gamma_fit(kernel_casimir_scalar(Boundary::neumann), options(Family::sphere));
  CHECK(oracle::rel(n.gamma, gamma_neumann) < 1e-2);
  CHECK(n.rho_m_drift < 2e-2);
}

TEST_CASE("cylinder-plane Casimir coefficients") {
  const auto d = gamma_fit(kernel_casimir_scalar(Boundary::dirichlet), options(Family::cylinder));
  CHECK(d.base_dim == 1);
  CHECK(oracle::rel(d.gamma, gamma_cyl_dirichlet) < 1e-2);
  const auto n = gamma_fit(kernel_casimir_scalar(Boundary::neumann), options(Family::cylinder));
  CHECK(oracle::rel(n.gamma, gamma_cyl_neumann) < 1e-2);
  CHECK(n.gamma == doctest::Approx(-1.156505).scale(0).epsilon(1e-3));
}

TEST_CASE("high-temperature coefficients") {
  const auto r = gamma_fit_log(kernel_highT_dirichlet(1.0, 2), options(Family::sphere));
  REQUIRE(r.gamma_log.has_value());
  CHECK(oracle::rel(*r.gamma_log, -1.0 / (6.0 * zeta3)) < 2e-2);
  CHECK(std::abs(r.leading_ratio - 1.0) < 5e-3);
  CHECK(r.rho_m_drift_log.value() < 2e-2);
  // The pure x coefficient carries the planform cut.
  CHECK(r.rho_m_drift > r.rho_m_drift_log.value());

  const auto d4 = gamma_fit(kernel_highT_dirichlet(1.0, 3), options(Family::sphere));
  CHECK(d4.base_dim == 3);
  CHECK(oracle::rel(d4.gamma, 0.25) < 1e-2);

  CHECK_THROWS_AS(gamma_fit(kernel_highT_dirichlet(1.0, 2), options(Family::sphere)), DomainError);
}

TEST_CASE("log model does not invent logarithms") {
  const auto r = gamma_fit_log(kernel_casimir_scalar(Boundary::dirichlet), options(Family::sphere));
  CHECK(std::abs(r.gamma_log.value()) < 0.01 * std::abs(r.gamma));
}

TEST_CASE("dropping the largest rung stays within the uncertainty") {
  for (Boundary bc : {Boundary::dirichlet, Boundary::neumann}) {
    const auto k = kernel_casimir_scalar(bc);
    auto o = options(Family::sphere);
    o.ladder = {1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};
    const auto full = gamma_fit(k, o);
    o.ladder.pop_back();
    const auto reduced = gamma_fit(k, o);
    CHECK(std::abs(full.gamma - reduced.gamma) < full.uncertainty);
  }
}

TEST_CASE("gamma fit validation") {
  const auto k = kernel_casimir_scalar(Boundary::dirichlet);
  auto o = options(Family::sphere);
  o.ladder = {1e-3, 2e-3, 4e-3};
  CHECK_THROWS_AS(gamma_fit(k, o), DomainError);
  o.ladder = {1e-3, 2e-3, 4e-3, 3e-2};
  CHECK_THROWS_AS(gamma_fit(k, o), DomainError);
  o.ladder = {1e-3, 2e-3, 4e-3, 4e-3};
  CHECK_THROWS_AS(gamma_fit(k, o), DomainError);
  o = options(Family::sphere);
  o.rho_m_frac = 1.0;
  CHECK_THROWS_AS(gamma_fit(k, o), DomainError);
  o = options(Family::sphere);
  o.fit_tolerance = 1e-16;
  CHECK_THROWS_AS(gamma_fit(k, o), NumericalError);
  CHECK_THROWS_AS(gamma_fit(kernel_patch(PatchCorrelation::gaussian(), 1.0, 1.0, 1.0), options(Family::sphere)),
                  DomainError);
}

TEST_CASE("scaling check") {
  const auto k = kernel_power_law(1.0, 1.0, 3.0, 1.0);
  const auto rep = scaling_check(k, make_paraboloid(1.0, 10.0, 50.0), {0.5, 2.0, 4.0, 0.3});
  CHECK(rep.passed);
  CHECK(rep.max_violation < 1e-6);
  CHECK(rep.entries.size() == 12);
  for (const auto& e : rep.entries) {
    CHECK(e.expected == doctest::Approx(std::pow(e.lambda, e.order - 2)).scale(0).epsilon(1e-15));
    if (e.order == 0 && e.lambda == 2.0) CHECK(e.expected == 0.25);
    if (e.order == 2) CHECK(e.expected == 1.0);
  }

  const auto cyl = scaling_check(kernel_casimir_scalar(Boundary::dirichlet), make_cylinder(0.1, 1.0, 0.9), {2.0});
  CHECK(cyl.passed);
  REQUIRE(cyl.entries.size() == 2);
  CHECK(cyl.entries[0].expected == 0.5);

  const auto bump = scaling_check(k, make_gaussian_bump(1.0, -0.5, 1.0, 3.0), {0.5, 2.0, 4.0});
  CHECK(bump.passed);
  CHECK_THROWS_AS(scaling_check(k, make_gaussian_bump(1.0, -0.5, 1.0, 3.0), {0.0}), DomainError);

}

TEST_CASE("EM additivity") {
  const std::vector<SurfaceProfile> profiles{make_sphere(1e-3, 1.0, 0.9), make_constant(1.5, Disk{2.0}),
                                             make_gaussian_bump(1.0, -0.3, 0.8, 3.0)};
  const auto rep = em_additivity_check(profiles);
  CHECK(rep.passed);
  CHECK(rep.max_relative <= 1e-9);
  CHECK(rep.entries[1].relative == 0.0);

  const auto d = kernel_casimir_scalar(Boundary::dirichlet);
  const InteractionKernel broken("broken_em", 2, [&](double psi) { return 2.01 * d.V(psi); },
                                 [&](double psi) { return d.Z(psi); });
  const auto bad = em_additivity_check(profiles, {}, 1e-9, broken);
  CHECK_FALSE(bad.passed);
  CHECK(bad.max_relative > 1e-3);
}
