#include "deforce/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "deforce/error.hpp"

namespace deforce {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980528770, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the Kronrod nodes with odd index.
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

// A sample carries the integrand value plus an auxiliary channel that is
// integrated with the same rule but never drives refinement. Iterated
// integration uses it to accumulate the error of the inner integrals.
struct Sample {
  double value = 0.0;
  double aux = 0.0;
};

using SampleFn = std::function<Sample(double)>;

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double aux = 0.0;
  double error = 0.0;
  double resabs = 0.0;
  long id = 0;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;
  }
};

Sample checked(const SampleFn& f, double x) {
  const Sample s = f(x);
  if (!std::isfinite(s.value) || !std::isfinite(s.aux)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is not finite at x = " << x;
    throw NumericalError(os.str());
  }
  return s;
}

Panel apply_rule(const SampleFn& f, double lo, double hi, long id, int& evaluations) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const Sample fc = checked(f, center);
  double kronrod = fc.value * kKronrodWeights[10];
  double aux = fc.aux * kKronrodWeights[10];
  double gauss = 0.0;
  double resabs = std::abs(kronrod);
  std::array<double, 21> values{};
  values[10] = fc.value;

  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Sample a = checked(f, center - dx);
    const Sample b = checked(f, center + dx);
    values[j] = a.value;
    values[20 - j] = b.value;
    kronrod += kKronrodWeights[j] * (a.value + b.value);
    aux += kKronrodWeights[j] * (a.aux + b.aux);
    resabs += kKronrodWeights[j] * (std::abs(a.value) + std::abs(b.value));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (a.value + b.value);
  }
  evaluations += 21;

  const double mean = 0.5 * kronrod;
  double resasc = kKronrodWeights[10] * std::abs(fc.value - mean);
  for (int j = 0; j < 10; ++j)
    resasc += kKronrodWeights[j] * (std::abs(values[j] - mean) + std::abs(values[20 - j] - mean));

  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.id = id;
  p.value = kronrod * half;
  p.aux = aux * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  p.resabs = resabs;

  // QUADPACK error scaling.
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  p.error = err;
  return p;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  double aux = 0.0;
  int evaluations = 0;
};

// Globally adaptive bisection over a finite interval.
AdaptiveResult adaptive(const SampleFn& f, double lo, double hi, const QuadratureSpec& spec,
                        std::vector<double> cuts) {
  std::vector<double> edges;
  edges.push_back(lo);
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c > lo && c < hi && c > edges.back()) edges.push_back(c);
  edges.push_back(hi);

  AdaptiveResult out;
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  long next_id = 0;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = apply_rule(f, edges[i], edges[i + 1], next_id++, out.evaluations);
    total += p.value;
    total_err += p.error;
    total_abs += p.resabs;
    queue.push(p);
  }

  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  auto roundoff_limited = [&] { return total_err <= 50.0 * kEps * total_abs; };

  int panels = static_cast<int>(queue.size());
  bool stuck = false;
  while (total_err > target() && !roundoff_limited()) {
    if (panels >= spec.max_subdivisions) break;
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        std::abs(worst.hi - worst.lo) <= 100.0 * kEps * std::max(std::abs(mid), 1e-300)) {
      stuck = true;
      break;
    }
    queue.pop();
    Panel left = apply_rule(f, worst.lo, mid, next_id++, out.evaluations);
    Panel right = apply_rule(f, mid, worst.hi, next_id++, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.resabs + right.resabs - worst.resabs;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum in a fixed order so the result does not carry the running
  // update's cancellation error.
  std::vector<Panel> all;
  all.reserve(queue.size());
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  total = total_err = total_abs = 0.0;
  for (const Panel& p : all) {
    total += p.value;
    total_err += p.error;
    total_abs += p.resabs;
    out.aux += p.aux;
  }
  out.value = total;
  out.error = total_err;

  if (total_err > target() && !roundoff_limited()) {
    std::ostringstream os;
    os.precision(6);
    os << "adaptive quadrature on [" << lo << ", " << hi << "] did not converge ("
       << (stuck ? "panel width reached round-off" : "subdivision limit reached")
       << "): estimate " << total << " +/- " << total_err << " after " << panels << " panels";
    throw NumericalError(os.str(), total, total_err);
  }
  return out;
}

// Maps an interval with possibly infinite ends onto a finite one and
// integrates there.
AdaptiveResult adaptive_any(const SampleFn& f, double lo, double hi, const QuadratureSpec& spec,
                            std::span<const double> breakpoints) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integration limit is NaN");
  if (lo == hi) return {};
  if (lo > hi) {
    AdaptiveResult r = adaptive_any(f, hi, lo, spec, breakpoints);
    r.value = -r.value;
    r.aux = -r.aux;
    return r;
  }
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());

  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) return adaptive(f, lo, hi, spec, std::move(cuts));

  if (lo_inf && hi_inf) {
    AdaptiveResult a = adaptive_any(f, lo, 0.0, spec, breakpoints);
    AdaptiveResult b = adaptive_any(f, 0.0, hi, spec, breakpoints);
    return {a.value + b.value, a.error + b.error, a.aux + b.aux, a.evaluations + b.evaluations};
  }

  // Semi-infinite: x = origin + sign * t / (1 - t), t in [0, 1).
  const double origin = lo_inf ? hi : lo;
  const double sign = lo_inf ? -1.0 : 1.0;
  SampleFn mapped = [&](double t) {
    const double u = 1.0 - t;
    // t rounds to 1 only after deep subdivision near the endpoint.
    if (u <= 0.0) return Sample{0.0, 0.0};
    const double x = origin + sign * t / u;
    const Sample s = checked(f, x);
    const double jac = 1.0 / (u * u);
    return Sample{s.value == 0.0 ? 0.0 : s.value * jac, s.aux == 0.0 ? 0.0 : s.aux * jac};
  };
  std::vector<double> tcuts;
  for (double c : cuts) {
    const double dist = sign * (c - origin);
    if (dist > 0.0 && std::isfinite(dist)) tcuts.push_back(dist / (1.0 + dist));
  }
  return adaptive(mapped, 0.0, 1.0, spec, std::move(tcuts));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 1e-14 && rel_tol < 1e-2))
    throw DomainError("quad.rel_tol must lie in (1e-14, 1e-2)");
  if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol))
    throw DomainError("quad.abs_tol must be finite and non-negative");
  if (max_subdivisions < 1) throw DomainError("quad.max_subdiv must be at least 1");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec s = *this;
  s.rel_tol *= factor;
  s.abs_tol *= factor;
  return s;
}

QuadResult integrate_interval(const Integrand1D& f, double lo, double hi,
                              const QuadratureSpec& spec, std::span<const double> breakpoints) {
  SampleFn g = [&](double x) { return Sample{f(x), 0.0}; };
  const AdaptiveResult r = adaptive_any(g, lo, hi, spec, breakpoints);
  return {r.value, r.error, r.evaluations};
}

QuadResult integrate_improper(const Integrand1D& f, const QuadratureSpec& spec, double lower,
                              std::span<const double> breakpoints) {
  return integrate_interval(f, lower, kInfinity, spec, breakpoints);
}

QuadResult integrate_radial(const Integrand1D& f, double rho_max, int n,
                            const QuadratureSpec& spec, std::span<const double> breakpoints) {
  if (n < 1 || n > 3) throw DomainError("integrate_radial: base dimension must be 1, 2 or 3");
  if (!(rho_max > 0.0)) throw DomainError("integrate_radial: rho_max must be positive");
  const double surface = unit_sphere_surface(n);
  Integrand1D g;
  switch (n) {
    case 1: g = [&](double r) { return f(r); }; break;
    case 2: g = [&](double r) { return r * f(r); }; break;
    default: g = [&](double r) { return r * r * f(r); }; break;
  }
  QuadResult r = integrate_interval(g, 0.0, rho_max, spec, breakpoints);
  r.value *= surface;
  r.error *= surface;
  return r;
}

namespace {

// Iterated integration over a product of intervals in some coordinate
// system; map() turns the coordinate tuple into a point and a Jacobian.
struct Iterated {
  struct Axis {
    double lo, hi;
    std::vector<double> cuts;
  };
  std::vector<Axis> axes;
  std::function<double(std::span<const double> coords, std::span<double> point)> map;
  const IntegrandND* f = nullptr;
  QuadratureSpec spec;
  int evaluations = 0;

  Sample level(std::size_t k, std::vector<double>& coords, std::vector<double>& point) {
    const Axis& axis = axes[k];
    QuadratureSpec local = spec;
    if (k > 0) local = spec.tightened(0.25);
    if (k + 1 == axes.size()) {
      SampleFn g = [&](double u) {
        coords[k] = u;
        const double jac = map(coords, point);
        if (jac == 0.0) return Sample{};
        return Sample{(*f)(point) * jac, 0.0};
      };
      const AdaptiveResult r = adaptive_any(g, axis.lo, axis.hi, local, axis.cuts);
      evaluations += r.evaluations;
      return {r.value, r.error};
    }
    SampleFn g = [&](double u) {
      coords[k] = u;
      return level(k + 1, coords, point);
    };
    const AdaptiveResult r = adaptive_any(g, axis.lo, axis.hi, local, axis.cuts);
    evaluations += r.evaluations;
    return {r.value, r.error + std::abs(r.aux)};
  }
};

}  // namespace

QuadResult integrate_nd(const IntegrandND& f, const Domain& domain, const QuadratureSpec& spec,
                        std::span<const double> radial_breakpoints) {
  Iterated it;
  it.f = &f;
  it.spec = spec;
  std::vector<double> cuts(radial_breakpoints.begin(), radial_breakpoints.end());
  using std::numbers::pi;

  if (const auto* d = std::get_if<Interval>(&domain)) {
    it.axes = {{d->lo, d->hi, cuts}};
    it.map = [](std::span<const double> c, std::span<double> x) {
      x[0] = c[0];
      return 1.0;
    };
  } else if (const auto* d = std::get_if<Rectangle>(&domain)) {
    it.axes = {{d->x0, d->x1, cuts}, {d->y0, d->y1, cuts}};
    it.map = [](std::span<const double> c, std::span<double> x) {
      x[0] = c[0];
      x[1] = c[1];
      return 1.0;
    };
  } else if (const auto* d = std::get_if<Disk>(&domain)) {
    it.axes = {{0.0, d->radius, cuts}, {0.0, 2.0 * pi, {0.5 * pi, pi, 1.5 * pi}}};
    it.map = [](std::span<const double> c, std::span<double> x) {
      x[0] = c[0] * std::cos(c[1]);
      x[1] = c[0] * std::sin(c[1]);
      return c[0];
    };
  } else if (const auto* d = std::get_if<Box>(&domain)) {
    it.axes = {{d->lo[0], d->hi[0], cuts}, {d->lo[1], d->hi[1], cuts}, {d->lo[2], d->hi[2], cuts}};
    it.map = [](std::span<const double> c, std::span<double> x) {
      x[0] = c[0];
      x[1] = c[1];
      x[2] = c[2];
      return 1.0;
    };
  } else if (const auto* d = std::get_if<Ball>(&domain)) {
    it.axes = {{0.0, d->radius, cuts}, {0.0, pi, {0.5 * pi}}, {0.0, 2.0 * pi, {0.5 * pi, pi, 1.5 * pi}}};
    it.map = [](std::span<const double> c, std::span<double> x) {
      const double s = std::sin(c[1]);
      x[0] = c[0] * s * std::cos(c[2]);
      x[1] = c[0] * s * std::sin(c[2]);
      x[2] = c[0] * std::cos(c[1]);
      return c[0] * c[0] * s;
    };
  }

  std::vector<double> coords(it.axes.size(), 0.0);
  std::vector<double> point(it.axes.size(), 0.0);
  const Sample s = it.level(0, coords, point);
  return {s.value, s.aux, it.evaluations};
}

}  // namespace deforce
