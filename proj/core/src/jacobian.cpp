#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "deforce/engine.hpp"
#include "deforce/error.hpp"

namespace deforce {
namespace {

// Measure of the n-ball of radius r.
double ball_measure(int n, double r) {
  switch (n) {
    case 1: return 2.0 * r;
    case 2: return std::numbers::pi * r * r;
    default: return 4.0 / 3.0 * std::numbers::pi * r * r * r;
  }
}

double radial_psi(const SurfaceProfile& p, double rho) {
  std::array<double, 3> x{rho, 0.0, 0.0};
  return p.eval(std::span<const double>(x.data(), p.base_dim())).psi;
}

// +1 non-decreasing, -1 non-increasing, 0 otherwise.
int radial_monotonicity(const SurfaceProfile& p, double rho_max) {
  constexpr int kSamples = 512;
  bool up = true, down = true;
  double prev = radial_psi(p, 0.0);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = radial_psi(p, rho_max * i / kSamples);
    if (v < prev) up = false;
    if (v > prev) down = false;
    prev = v;
  }
  if (up && down) return 0;
  return up ? 1 : (down ? -1 : 0);
}

// Area inside the planform where psi <= h, for a monotone radial profile.
double sublevel_measure(const SurfaceProfile& p, double rho_max, int direction, double h) {
  const int n = p.base_dim();
  const double at0 = radial_psi(p, 0.0), at_max = radial_psi(p, rho_max);
  const double total = ball_measure(n, rho_max);
  if (direction > 0) {
    if (h <= at0) return 0.0;
    if (h >= at_max) return total;
  } else {
    if (h < at_max) return 0.0;
    if (h >= at0) return total;
  }
  auto fn = [&](double rho) { return radial_psi(p, rho) - h; };
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(fn, 0.0, rho_max, tol, iters);
  const double rho = 0.5 * (lo + hi);
  return direction > 0 ? ball_measure(n, rho) : total - ball_measure(n, rho);
}

struct Bounds {
  std::array<double, 3> lo{}, hi{};
};

Bounds bounding_box(const Domain& d, int n) {
  Bounds b;
  if (const auto* iv = std::get_if<Interval>(&d)) {
    b.lo[0] = iv->lo;
    b.hi[0] = iv->hi;
  } else if (const auto* r = std::get_if<Rectangle>(&d)) {
    b.lo = {r->x0, r->y0, 0.0};
    b.hi = {r->x1, r->y1, 0.0};
  } else if (const auto* box = std::get_if<Box>(&d)) {
    b.lo = box->lo;
    b.hi = box->hi;
  } else {
    const double r = outer_radius(d);
    for (int i = 0; i < n; ++i) {
      b.lo[i] = -r;
      b.hi[i] = r;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]))
      throw DomainError("compute_jacobian: cell counting needs a bounded planform");
  return b;
}

// Area per bin by counting cells; cells whose corner values fall in
// different bins (or straddle the planform edge) are subdivided once.
void count_cells(const SurfaceProfile& p, const std::vector<double>& edges, int cells, int refine,
                 std::vector<double>& area) {
  const int n = p.base_dim();
  const Domain& dom = p.planform();
  const Bounds b = bounding_box(dom, n);
  const int bins = static_cast<int>(edges.size()) - 1;
  const double h0 = edges.front(), width = (edges.back() - edges.front()) / bins;
  auto bin_of = [&](double h) {
    if (h < h0 || h > edges.back()) return -1;
    return std::min(static_cast<int>((h - h0) / width), bins - 1);
  };

  std::array<int, 3> count{1, 1, 1};
  std::array<double, 3> step{1.0, 1.0, 1.0};
  for (int i = 0; i < n; ++i) {
    count[i] = cells;
    step[i] = (b.hi[i] - b.lo[i]) / cells;
  }
  const double cell_vol = step[0] * (n > 1 ? step[1] : 1.0) * (n > 2 ? step[2] : 1.0);

  auto sample = [&](const std::array<double, 3>& x, double& psi) {
    const std::span<const double> pt(x.data(), n);
    if (!contains(dom, pt)) return false;
    psi = p.eval(pt).psi;
    return true;
  };

  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < count[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < count[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < count[2]; ++idx[2]) {
        // Corners.
        bool uniform = true;
        int first_bin = -2;
        const int corners = 1 << n;
        for (int c = 0; c < corners && uniform; ++c) {
          std::array<double, 3> x{};
          for (int i = 0; i < n; ++i) x[i] = b.lo[i] + (idx[i] + ((c >> i) & 1)) * step[i];
          double psi = 0.0;
          const int bin = sample(x, psi) ? bin_of(psi) : -3;
          if (first_bin == -2) first_bin = bin;
          if (bin != first_bin || bin < 0) uniform = false;
        }
        if (uniform) {
          area[first_bin] += cell_vol;
          continue;
        }
        const int m = refine;
        const double sub_vol = cell_vol / std::pow(m, n);
        std::array<int, 3> sub{};
        std::array<int, 3> sub_count{1, 1, 1};
        for (int i = 0; i < n; ++i) sub_count[i] = m;
        for (sub[0] = 0; sub[0] < sub_count[0]; ++sub[0])
          for (sub[1] = 0; sub[1] < sub_count[1]; ++sub[1])
            for (sub[2] = 0; sub[2] < sub_count[2]; ++sub[2]) {
              std::array<double, 3> x{};
              for (int i = 0; i < n; ++i)
                x[i] = b.lo[i] + (idx[i] + (sub[i] + 0.5) / m) * step[i];
              double psi = 0.0;
              if (!sample(x, psi)) continue;
              const int bin = bin_of(psi);
              if (bin >= 0) area[bin] += sub_vol;
            }
      }
}

}  // namespace

JacobianProfile compute_jacobian(const SurfaceProfile& p, const JacobianOptions& opts) {
  if (opts.bins < 2) throw DomainError("compute_jacobian: need at least 2 bins");
  if (opts.cells < 1 || opts.refine < 1) throw DomainError("compute_jacobian: cells and refine must be positive");

  JacobianProfile jac;
  jac.d = p.min_gap();
  const double h_min = opts.h_min.value_or(p.min_gap());
  const double h_max = opts.h_max.value_or(p.max_gap());
  if (!std::isfinite(h_max))
    throw DomainError("compute_jacobian: unbounded gap; give h_max explicitly");
  if (!(h_min > 0.0)) throw DomainError("compute_jacobian: h_min must be positive");

  const double rho_max = outer_radius(p.planform());

  if (!(h_max > h_min * (1.0 + 1e-12))) {
    // Constant gap: the Jacobian is a delta function at h = d.
    jac.degenerate = true;
    jac.total_area = measure(p.planform());
    jac.window_lo = jac.window_hi = h_min;
    jac.J0 = jac.J1 = 0.0;
    return jac;
  }

  const int bins = opts.bins;
  jac.edges.resize(bins + 1);
  for (int k = 0; k <= bins; ++k) jac.edges[k] = h_min + (h_max - h_min) * k / bins;
  jac.edges[bins] = h_max;
  std::vector<double> area(bins, 0.0);

  int direction = 0;
  if (opts.prefer_level_sets && p.axisymmetric() && is_radial(p.planform()) && std::isfinite(rho_max))
    direction = radial_monotonicity(p, rho_max);

  if (direction != 0) {
    jac.exact_level_sets = true;
    double prev = sublevel_measure(p, rho_max, direction, jac.edges[0]);
    for (int k = 0; k < bins; ++k) {
      const double next = sublevel_measure(p, rho_max, direction, jac.edges[k + 1]);
      area[k] = next - prev;
      prev = next;
    }
    // Points exactly at h_min belong to the first bin.
    area[0] += sublevel_measure(p, rho_max, direction, jac.edges[0]);
  } else {
    count_cells(p, jac.edges, opts.cells, opts.refine, area);
  }

  jac.centers.resize(bins);
  jac.values.resize(bins);
  jac.total_area = 0.0;
  for (int k = 0; k < bins; ++k) {
    const double w = jac.edges[k + 1] - jac.edges[k];
    jac.centers[k] = 0.5 * (jac.edges[k] + jac.edges[k + 1]);
    jac.values[k] = area[k] / w;
    jac.total_area += area[k];
  }

  // Linear fit on the near-contact window.
  const auto R = p.curvature_radius();
  jac.window_lo = opts.window_lo.value_or(jac.d);
  jac.window_hi = opts.window_hi.value_or(R ? jac.d + 0.1 * *R : h_max);
  std::vector<double> xs, ys;
  for (int k = 0; k < bins; ++k) {
    if (jac.centers[k] < jac.window_lo || jac.centers[k] > jac.window_hi) continue;
    if (!(jac.values[k] > 0.0))
      throw DomainError("compute_jacobian: empty bin at h = " + std::to_string(jac.centers[k]) +
                        " inside the fit window");
    xs.push_back(jac.centers[k] - jac.d);
    ys.push_back(jac.values[k]);
  }
  if (xs.size() < 2)
    throw DomainError("compute_jacobian: fewer than 2 bins inside the fit window; "
                      "widen the window or add bins");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  jac.J1 = sxy / sxx;
  jac.J0 = my - jac.J1 * mx;
  return jac;
}

double jacobian_energy(const Density& E, const JacobianProfile& jac) {
  if (jac.degenerate) return jac.total_area * E(jac.d);
  QuadratureSpec spec;
  double total = 0.0;
  for (std::size_t k = 0; k < jac.values.size(); ++k) {
    if (jac.values[k] == 0.0) continue;
    total += jac.values[k] * integrate_interval(E, jac.edges[k], jac.edges[k + 1], spec).value;
  }
  return total;
}

}  // namespace deforce
