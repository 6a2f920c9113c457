#include <doctest.h>

#include <cmath>
#include <deforce/error.hpp>
#include <deforce/quadrature.hpp>
#include <random>
#include <vector>

#include "oracles.hpp"

using namespace deforce;
using oracle::pi;

TEST_CASE("radial integration of simple integrands") {
  const QuadratureSpec spec;
  CHECK(integrate_radial([](double) { return 1.0; }, 1.0, 2, spec).value == doctest::Approx(pi).scale(0).epsilon(1e-14));

  // Paraboloid PFA integrand with a = 1, sigma = 10 over the whole plane.
  const auto r = integrate_radial([](double rho) { return std::pow(1.0 + rho * rho / 100.0, -3.0); },
                                  kInfinity, 2, spec);
  const long double direct = oracle::simpson_geometric(
      [](long double t) {
        // rho = t / (1 - t)
        const long double u = 1 - t, rho = t / u;
        return 2 * oracle::pi * rho * std::pow(1 + rho * rho / 100, -3.0L) / (u * u);
      },
      1e-9L, 1 - 1e-9L, 40, 2000);
  CHECK(oracle::rel(r.value, static_cast<double>(direct)) < 1e-9);
  CHECK(oracle::rel(r.value, pi / 2.0 * 100.0) < 1e-9);

  // Line symmetry factor 2 for n = 1.
  CHECK(integrate_radial([](double x) { return x * x; }, 2.0, 1, spec).value ==
        doctest::Approx(16.0 / 3.0).scale(0).epsilon(1e-14));
}

TEST_CASE("improper integrals") {
  const QuadratureSpec spec;
  const auto bose = integrate_improper([](double x) { return x * x / std::expm1(2.0 * x); }, spec);
  const long double sim = oracle::simpson(
      [](long double x) { return x == 0 ? 0.0L : x * x / std::expm1(2 * x); }, 0.0L, 40.0L, 400000);
  CHECK(oracle::rel(bose.value, static_cast<double>(sim)) < 1e-10);
  CHECK(oracle::rel(bose.value, std::riemann_zeta(3.0) / 4.0) < 1e-10);

  CHECK(integrate_improper([](double x) { return std::exp(-x); }, spec).value ==
        doctest::Approx(1.0).scale(0).epsilon(1e-12));
  CHECK(integrate_improper([](double h) { return std::pow(h, -3.0); }, spec, 1.0).value ==
        doctest::Approx(0.5).scale(0).epsilon(1e-12));
  CHECK(integrate_interval([](double x) { return std::exp(x); }, -kInfinity, 0.0, spec).value ==
        doctest::Approx(1.0).scale(0).epsilon(1e-12));
  CHECK(integrate_interval([](double x) { return std::exp(-x * x); }, -kInfinity, kInfinity, spec).value ==
        doctest::Approx(std::sqrt(pi)).scale(0).epsilon(1e-12));
}

TEST_CASE("reversed limits flip the sign") {
  const QuadratureSpec spec;
  auto f = [](double x) { return std::sin(x) + 2.0; };
  CHECK(integrate_interval(f, 3.0, 0.5, spec).value ==
        doctest::Approx(-integrate_interval(f, 0.5, 3.0, spec).value).scale(0).epsilon(1e-15));
  CHECK(integrate_interval(f, 1.0, 1.0, spec).value == 0.0);
}

TEST_CASE("polynomials are integrated to machine precision") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const QuadratureSpec spec;
  for (int degree = 0; degree <= 20; ++degree) {
    std::vector<double> c(degree + 1);
    for (double& v : c) v = coef(rng);
    auto poly = [&](double x) {
      double s = 0.0;
      for (int k = degree; k >= 0; --k) s = s * x + c[k];
      return s;
    };
    long double exact = 0.0L;  // over [-1, 2]
    for (int k = 0; k <= degree; ++k)
      exact += c[k] * (std::pow(2.0L, k + 1) - std::pow(-1.0L, k + 1)) / (k + 1);
    const auto r = integrate_interval(poly, -1.0, 2.0, spec);
    CHECK(std::abs(r.value - static_cast<double>(exact)) <= 1e-13 * std::max(1.0, std::abs(static_cast<double>(exact))));
  }
}

TEST_CASE("tightening the tolerance never increases the true error") {
  struct Case {
    std::function<double(double)> f;
    double lo, hi, exact;
  };
  const std::vector<Case> cases{
      {[](double x) { return std::exp(-x); }, 0.0, kInfinity, 1.0},
      {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInfinity, pi / 2.0},
      {[](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
      {[](double x) { return std::log(x); }, 0.0, 1.0, -1.0},
      {[](double x) { return std::pow(x, -3.0); }, 1.0, kInfinity, 0.5},
      {[](double x) { return x * x / std::expm1(2.0 * x); }, 0.0, kInfinity, std::riemann_zeta(3.0) / 4.0},
  };
  for (const Case& c : cases) {
    double previous = kInfinity;
    for (double tol : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11}) {
      QuadratureSpec spec;
      spec.rel_tol = tol;
      const auto r = integrate_interval(c.f, c.lo, c.hi, spec);
      const double err = std::abs(r.value - c.exact);
      CHECK(r.error >= 0.0);
      CHECK(err <= r.error + 4e-16 * std::abs(c.exact));
      CHECK(err <= std::max(previous, 8e-16 * std::abs(c.exact)));
      previous = err;
    }
  }
}

TEST_CASE("nd integration") {
  const QuadratureSpec spec;
  CHECK(integrate_nd([](std::span<const double>) { return 1.0; }, Rectangle{}, spec).value ==
        doctest::Approx(1.0).scale(0).epsilon(1e-14));
  CHECK(integrate_nd([](std::span<const double>) { return 1.0; }, Box{{0, 0, 0}, {1, 2, 3}}, spec).value ==
        doctest::Approx(6.0).scale(0).epsilon(1e-13));
  CHECK(integrate_nd([](std::span<const double> x) { return x[0] * x[1]; },
                     Rectangle{0.0, 2.0, 0.0, 3.0}, spec)
            .value == doctest::Approx(9.0).scale(0).epsilon(1e-13));

  SUBCASE("radial and nd agree for axisymmetric integrands") {
    auto g = [](double rho) { return std::exp(-rho * rho) * (1.0 + rho); };
    for (int n : {1, 2, 3}) {
      for (double radius : {1.5, kInfinity}) {
        const Domain d = n == 1 ? Domain(Interval{-radius, radius})
                                : (n == 2 ? Domain(Disk{radius}) : Domain(Ball{radius}));
        const auto radial = integrate_radial(g, radius, n, spec);
        const auto nd = integrate_nd(
            [&](std::span<const double> x) {
              double r2 = 0.0;
              for (double v : x) r2 += v * v;
              return g(std::sqrt(r2));
            },
            d, spec);
        const double tol = std::max(1e-8 * std::abs(radial.value), radial.error + nd.error);
        CHECK(std::abs(radial.value - nd.value) <= tol);
      }
    }
  }

  SUBCASE("off-centre gaussian on a disk against a Riemann sum") {
    auto f = [](std::span<const double> x) {
      return std::exp(-((x[0] - 0.3) * (x[0] - 0.3) + x[1] * x[1]));
    };
    const auto r = integrate_nd(f, Disk{2.0}, spec);
    const long double ref = oracle::riemann2d(
        [](long double x, long double y) {
          return x * x + y * y <= 4.0L ? std::exp(-((x - 0.3L) * (x - 0.3L) + y * y)) : 0.0L;
        },
        -2, 2, -2, 2, 2000, 2000);
    CHECK(oracle::rel(r.value, static_cast<double>(ref)) < 1e-3);
  }
}

TEST_CASE("quadrature errors") {
  QuadratureSpec spec;
  CHECK_THROWS_AS(integrate_interval([](double x) { return 1.0 / (x - 0.5) / 0.0; }, 0.0, 1.0, spec),
                  NumericalError);
  try {
    integrate_interval([](double x) { return x > 0.25 ? std::nan("") : 1.0; }, 0.0, 1.0, spec);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("not finite at x =") != std::string::npos);
  }

  spec.max_subdivisions = 4;
  try {
    integrate_interval([](double x) { return std::sin(1e4 * x); }, 0.0, 1.0, spec);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error() > 0.0);
  }

  for (double tol : {0.0, 1e-15, 1e-2, 0.5, -1.0}) {
    QuadratureSpec bad;
    bad.rel_tol = tol;
    CHECK_THROWS_AS(bad.validate(), DomainError);
  }
}

TEST_CASE("results are reproducible bit for bit") {
  const QuadratureSpec spec;
  auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x) / (1.0 + x * x); };
  const auto a = integrate_interval(f, 0.0, kInfinity, spec);
  const auto b = integrate_interval(f, 0.0, kInfinity, spec);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  CHECK(a.evaluations == b.evaluations);
}
