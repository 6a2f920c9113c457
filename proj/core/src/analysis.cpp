#include "deforce/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "deforce/error.hpp"
#include "deforce/parallel.hpp"

namespace deforce {
namespace {

using std::numbers::pi;

constexpr double kExponentMatch = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool same_exponent(double a, double b) { return std::abs(a - b) < kExponentMatch; }

int family_dim(const InteractionKernel& k, Family f) {
  if (f == Family::cylinder) return 1;
  return k.plane_dim() == 0 ? 2 : k.plane_dim();
}

const PowerLaw& require_power_law(const InteractionKernel& k) {
  if (!k.power_law())
    throw DomainError("gamma_fit: kernel " + k.name() +
                      " is not a pure power law; the analytic leading term is unavailable");
  const PowerLaw& law = *k.power_law();
  if (law.v0 == 0.0) throw DomainError("gamma_fit: kernel " + k.name() + " has v0 = 0");
  return law;
}

void validate(const GammaFitOptions& o) {
  if (!(o.R > 0.0) || !std::isfinite(o.R)) throw DomainError("gamma_fit: R must be positive");
  if (o.ladder.size() < 4)
    throw DomainError("gamma_fit: ladder needs at least 4 points, got " +
                      std::to_string(o.ladder.size()));
  if (!(o.max_x > 0.0)) throw DomainError("gamma_fit: max_x must be positive");
  for (double x : o.ladder)
    if (!(x > 0.0) || x > o.max_x)
      throw DomainError("gamma_fit: ladder value " + fmt(x) + " outside (0, " + fmt(o.max_x) + "]");
  std::vector<double> sorted = o.ladder;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("gamma_fit: ladder values must be distinct");
  for (double f : {o.rho_m_frac, o.rho_m_frac_alt})
    if (!(f > 0.0 && f < 1.0))
      throw DomainError("gamma_fit: planform fraction " + fmt(f) + " outside (0, 1)");
  if (!(o.max_exponent > 1.0)) throw DomainError("gamma_fit: max_exponent must exceed 1");
  if (!(o.fit_tolerance > 0.0)) throw DomainError("gamma_fit: fit_tolerance must be positive");
}

std::size_t index_of(const std::vector<FitTerm>& terms, FitTerm t) {
  const auto it = std::find(terms.begin(), terms.end(), t);
  return static_cast<std::size_t>(it - terms.begin());
}

struct Extracted {
  double gamma = 0.0;
  double sigma = 0.0;
  std::optional<double> gamma_log;
  std::optional<double> sigma_log;
};

Extracted extract(const FitSolution& s) {
  Extracted e;
  const std::size_t ix = index_of(s.terms, {1.0, false});
  e.gamma = s.coefficients(ix);
  e.sigma = std::sqrt(std::max(0.0, s.covariance(ix, ix)));
  const std::size_t il = index_of(s.terms, {1.0, true});
  if (il < s.terms.size()) {
    e.gamma_log = s.coefficients(il);
    e.sigma_log = std::sqrt(std::max(0.0, s.covariance(il, il)));
  }
  return e;
}

}  // namespace

std::string to_string(FitModel m) { return m == FitModel::linear ? "linear" : "log"; }
std::string to_string(Family f) { return f == Family::sphere ? "sphere" : "cylinder"; }

double FitTerm::operator()(double x) const {
  const double v = std::pow(x, exponent);
  return with_log ? v * std::log(x) : v;
}

std::string FitTerm::name() const {
  std::string s = "x";
  if (!same_exponent(exponent, 1.0)) s += "^" + fmt(exponent);
  if (with_log) s += "*ln(x)";
  return s;
}

double leading_reference(const PowerLaw& law, int n, double a, double R) {
  const double half = 0.5 * n;
  if (!(law.p > half)) throw DomainError("leading_reference: needs p > n/2");
  return law.v0 * std::pow(2.0 * pi * R, half) * std::pow(a, half - law.p) *
         std::exp(std::lgamma(law.p - half) - std::lgamma(law.p));
}

double analytic_gamma(double p, int n, double b) {
  const double q = p - 0.5 * n;
  if (same_exponent(q, 1.0))
    throw DomainError("analytic_gamma: p - n/2 = 1 gives a logarithmic correction");
  return 0.5 * n * (2.0 * b - 0.25 * (n + 2)) / (q - 1.0);
}

double analytic_gamma_log(double p, int n, double b) {
  if (!same_exponent(p - 0.5 * n, 1.0)) return 0.0;
  return -0.5 * n * (2.0 * b - 0.25 * (n + 2));
}

std::vector<FitTerm> fit_terms(FitModel model, double p, int n, double max_exponent) {
  const double q = p - 0.5 * n;
  if (q < 1.0 - kExponentMatch)
    throw DomainError("fit_terms: p - n/2 = " + fmt(q) +
                      " < 1; the planform cut dominates the a/R correction");
  const bool log_case = same_exponent(q, 1.0);
  if (log_case && model == FitModel::linear)
    throw DomainError("fit_terms: p - n/2 = 1 produces an (a/R) ln(a/R) term; use the log model");

  std::vector<FitTerm> terms{{1.0, false}};
  if (model == FitModel::log) terms.push_back({1.0, true});

  std::vector<double> cut, curvature;
  for (double e = q; e <= max_exponent + kExponentMatch; e += 1.0)
    if (e > 1.0 + kExponentMatch) cut.push_back(e);
  for (double e = 2.0; e <= max_exponent + kExponentMatch; e += 1.0) curvature.push_back(e);

  std::vector<double> all = cut;
  all.insert(all.end(), curvature.begin(), curvature.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(), same_exponent), all.end());
  for (double e : all) {
    terms.push_back({e, false});
    const bool in_cut = std::any_of(cut.begin(), cut.end(), [&](double c) { return same_exponent(c, e); });
    const bool in_curv =
        std::any_of(curvature.begin(), curvature.end(), [&](double c) { return same_exponent(c, e); });
    if (in_cut && in_curv) terms.push_back({e, true});
  }
  return terms;
}

FitSolution solve_fit(const std::vector<LadderPoint>& points, std::vector<FitTerm> terms) {
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  if (m == 0) throw DomainError("solve_fit: no points");
  if (terms.size() > points.size()) terms.resize(points.size());
  const Eigen::Index k = static_cast<Eigen::Index>(terms.size());

  Eigen::MatrixXd B(m, k);
  Eigen::VectorXd y(m), var(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const LadderPoint& pt = points[static_cast<std::size_t>(i)];
    const double sw = 1.0 / pt.x;  // sqrt of the 1/x^2 weight
    for (Eigen::Index j = 0; j < k; ++j) B(i, j) = sw * terms[static_cast<std::size_t>(j)](pt.x);
    y(i) = sw * (pt.ratio - 1.0);
    var(i) = sw * sw * pt.ratio_error * pt.ratio_error;
  }
  // Column equilibration keeps x and x^2.5 comparable.
  Eigen::VectorXd scale(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = B.col(j).norm();
    scale(j) = norm > 0.0 ? 1.0 / norm : 1.0;
    B.col(j) *= scale(j);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  if (qr.rank() < k) throw NumericalError("solve_fit: design matrix is rank deficient");
  const Eigen::MatrixXd P = qr.solve(Eigen::MatrixXd::Identity(m, m));  // k x m
  const Eigen::VectorXd c_scaled = P * y;

  FitSolution s;
  s.terms = terms;
  s.coefficients = scale.asDiagonal() * c_scaled;
  const Eigen::MatrixXd cov_scaled = P * var.asDiagonal() * P.transpose();
  s.covariance = scale.asDiagonal() * cov_scaled * scale.asDiagonal();
  for (const LadderPoint& pt : points) {
    double model = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
      model += s.coefficients(j) * terms[static_cast<std::size_t>(j)](pt.x);
    s.residual_max = std::max(s.residual_max, std::abs(pt.ratio - 1.0 - model));
  }
  return s;
}

std::vector<LadderPoint> gamma_ladder(const InteractionKernel& k, const GammaFitOptions& opts,
                                      double rho_m_frac, const QuadratureSpec& spec) {
  const PowerLaw& law = require_power_law(k);
  const int n = family_dim(k, opts.family);
  k.check_base_dim(n);
  std::vector<double> xs = opts.ladder;
  std::sort(xs.begin(), xs.end(), std::greater<>());

  std::vector<LadderPoint> points(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    LadderPoint& pt = points[i];
    pt.x = xs[i];
    const double a = pt.x * opts.R;
    const double rho_m = rho_m_frac * opts.R;
    const SurfaceProfile prof = opts.family == Family::sphere ? make_sphere(a, opts.R, rho_m, n)
                                                              : make_cylinder(a, opts.R, rho_m);
    const FunctionalResult r = eval_de2(k, prof, spec);
    pt.energy = r.total();
    pt.error = r.total_error();
    pt.lead = leading_reference(law, n, a, opts.R);
    pt.ratio = pt.energy / pt.lead;
    pt.ratio_error = pt.error / std::abs(pt.lead);
  });
  return points;
}

FitReport gamma_fit(const InteractionKernel& k, const GammaFitOptions& opts,
                    const QuadratureSpec& spec) {
  validate(opts);
  spec.validate();
  const PowerLaw& law = require_power_law(k);
  const int n = family_dim(k, opts.family);
  const std::vector<FitTerm> terms = fit_terms(opts.model, law.p, n, opts.max_exponent);

  FitReport rep;
  rep.model = opts.model;
  rep.family = opts.family;
  rep.kernel = k.name();
  rep.R = opts.R;
  rep.base_dim = n;
  rep.fit_tolerance = opts.fit_tolerance;
  rep.rho_m_frac = opts.rho_m_frac;
  rep.rho_m_frac_alt = opts.rho_m_frac_alt;

  rep.ladder = gamma_ladder(k, opts, opts.rho_m_frac, spec);
  const FitSolution main = solve_fit(rep.ladder, terms);
  if (!(main.residual_max <= opts.fit_tolerance))
    throw NumericalError("gamma_fit: fit residual " + fmt(main.residual_max) +
                             " above tolerance " + fmt(opts.fit_tolerance),
                         main.coefficients(0), main.residual_max);
  rep.terms = main.terms;
  rep.coefficients = main.coefficients;
  rep.covariance = main.covariance;
  rep.residual_max = main.residual_max;
  const Extracted e = extract(main);
  rep.gamma = e.gamma;
  rep.sigma_stat = e.sigma;
  rep.gamma_log = e.gamma_log;
  rep.sigma_stat_log = e.sigma_log;

  // Largest rung removed; ladder is sorted decreasing.
  const std::vector<LadderPoint> reduced(rep.ladder.begin() + 1, rep.ladder.end());
  const Extracted d = extract(solve_fit(reduced, terms));
  rep.rung_drift = std::abs(d.gamma - e.gamma);
  rep.uncertainty = std::hypot(rep.sigma_stat, rep.rung_drift);
  if (e.gamma_log && d.gamma_log) {
    rep.rung_drift_log = std::abs(*d.gamma_log - *e.gamma_log);
    rep.uncertainty_log = std::hypot(*rep.sigma_stat_log, *rep.rung_drift_log);
  }

  const std::vector<LadderPoint> alt = gamma_ladder(k, opts, opts.rho_m_frac_alt, spec);
  const Extracted a = extract(solve_fit(alt, terms));
  rep.gamma_alt = a.gamma;
  rep.rho_m_drift = std::abs(a.gamma - e.gamma) / std::abs(e.gamma);
  if (e.gamma_log && a.gamma_log) {
    rep.gamma_log_alt = a.gamma_log;
    rep.rho_m_drift_log = std::abs(*a.gamma_log - *e.gamma_log) / std::abs(*e.gamma_log);
  }

  const double b = law.z0 / law.v0;
  if (opts.reference) {
    rep.reference = opts.reference;
  } else if (opts.model == FitModel::linear) {
    rep.reference = analytic_gamma(law.p, n, b);
  } else {
    rep.reference = analytic_gamma_log(law.p, n, b);
  }
  const double target = opts.model == FitModel::linear ? rep.gamma : *rep.gamma_log;
  if (*rep.reference != 0.0) rep.deviation = std::abs(target / *rep.reference - 1.0);

  rep.leading_ratio = rep.ladder.back().ratio;
  return rep;
}

FitReport gamma_fit_log(const InteractionKernel& k, GammaFitOptions opts, const QuadratureSpec& spec) {
  opts.model = FitModel::log;
  return gamma_fit(k, opts, spec);
}

ScalingReport scaling_check(const InteractionKernel& k, const SurfaceProfile& p,
                            const std::vector<double>& lambdas, const QuadratureSpec& spec,
                            double tolerance) {
  ScalingReport rep;
  rep.profile = p.describe();
  rep.kernel = k.name();
  rep.tolerance = tolerance;
  const int n = p.base_dim();
  const bool with_f4 = k.has_fourth_order() && p.has_hessian();

  struct Orders {
    double f0, f2;
    std::optional<double> f4;
  };
  auto evaluate = [&](const SurfaceProfile& prof) {
    const FunctionalResult r = eval_de2(k, prof, spec);
    Orders o{r.F0, r.F2.value_or(0.0), std::nullopt};
    if (with_f4) o.f4 = eval_de4_term(k.C_density(), prof, spec).value;
    return o;
  };
  const Orders base = evaluate(p);

  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw DomainError("scaling_check: lambda must be positive");
    const Orders s = evaluate(scale_lateral(p, lambda));
    auto add = [&](int order, double orig, double scaled) {
      ScalingEntry e;
      e.order = order;
      e.lambda = lambda;
      e.expected = std::pow(lambda, order - n);
      if (orig == 0.0) {
        e.measured = scaled == 0.0 ? e.expected : kInfinity;
        e.violation = scaled == 0.0 ? 0.0 : kInfinity;
      } else {
        e.measured = scaled / orig;
        e.violation = std::abs(e.measured / e.expected - 1.0);
      }
      if (e.violation > rep.max_violation || rep.entries.empty()) {
        rep.max_violation = std::max(rep.max_violation, e.violation);
        rep.worst = "F" + std::to_string(order) + " at lambda = " + fmt(lambda) + ": ratio " +
                    fmt(e.measured) + ", expected " + fmt(e.expected);
      }
      rep.entries.push_back(e);
    };
    add(0, base.f0, s.f0);
    add(2, base.f2, s.f2);
    if (with_f4) add(4, *base.f4, *s.f4);
  }
  rep.passed = rep.max_violation <= tolerance;
  return rep;
}

AdditivityReport em_additivity_check(const std::vector<SurfaceProfile>& profiles,
                                     const QuadratureSpec& spec, double tolerance,
                                     const InteractionKernel& em,
                                     const InteractionKernel& dirichlet,
                                     const InteractionKernel& neumann) {
  AdditivityReport rep;
  rep.tolerance = tolerance;
  for (const SurfaceProfile& p : profiles) {
    const FunctionalResult re = eval_de2(em, p, spec);
    const FunctionalResult rd = eval_de2(dirichlet, p, spec);
    const FunctionalResult rn = eval_de2(neumann, p, spec);
    AdditivityEntry e;
    e.profile = p.describe();
    e.em = re.total();
    e.sum = rd.total() + rn.total();
    const double diff = std::abs(e.em - e.sum);
    e.relative = e.sum != 0.0 ? diff / std::abs(e.sum) : diff;
    e.combined_error = re.total_error() + rd.total_error() + rn.total_error();
    e.passed = e.relative <= tolerance || diff <= e.combined_error;
    rep.max_relative = std::max(rep.max_relative, e.relative);
    rep.passed = rep.passed && e.passed;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace deforce
