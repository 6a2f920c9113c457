#include "deforce/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "deforce/error.hpp"

namespace deforce {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

int dimension(const Domain& domain) {
  return std::visit(Overloaded{[](const Interval&) { return 1; },
                               [](const Rectangle&) { return 2; },
                               [](const Disk&) { return 2; },
                               [](const Box&) { return 3; },
                               [](const Ball&) { return 3; }},
                    domain);
}

double measure(const Domain& domain) {
  using std::numbers::pi;
  return std::visit(
      Overloaded{[](const Interval& d) { return d.hi - d.lo; },
                 [](const Rectangle& d) { return (d.x1 - d.x0) * (d.y1 - d.y0); },
                 [](const Disk& d) { return pi * d.radius * d.radius; },
                 [](const Box& d) {
                   return (d.hi[0] - d.lo[0]) * (d.hi[1] - d.lo[1]) * (d.hi[2] - d.lo[2]);
                 },
                 [](const Ball& d) { return 4.0 * pi / 3.0 * d.radius * d.radius * d.radius; }},
      domain);
}

bool contains(const Domain& domain, std::span<const double> x) {
  if (static_cast<int>(x.size()) != dimension(domain)) return false;
  return std::visit(
      Overloaded{[&](const Interval& d) { return x[0] >= d.lo && x[0] <= d.hi; },
                 [&](const Rectangle& d) {
                   return x[0] >= d.x0 && x[0] <= d.x1 && x[1] >= d.y0 && x[1] <= d.y1;
                 },
                 [&](const Disk& d) { return std::hypot(x[0], x[1]) <= d.radius; },
                 [&](const Box& d) {
                   for (int i = 0; i < 3; ++i)
                     if (x[i] < d.lo[i] || x[i] > d.hi[i]) return false;
                   return true;
                 },
                 [&](const Ball& d) {
                   return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) <= d.radius;
                 }},
      domain);
}

double outer_radius(const Domain& domain) {
  return std::visit(
      Overloaded{[](const Interval& d) { return std::max(std::abs(d.lo), std::abs(d.hi)); },
                 [](const Rectangle& d) {
                   const double x = std::max(std::abs(d.x0), std::abs(d.x1));
                   const double y = std::max(std::abs(d.y0), std::abs(d.y1));
                   return std::hypot(x, y);
                 },
                 [](const Disk& d) { return d.radius; },
                 [](const Box& d) {
                   double s = 0.0;
                   for (int i = 0; i < 3; ++i) {
                     const double c = std::max(std::abs(d.lo[i]), std::abs(d.hi[i]));
                     s += c * c;
                   }
                   return std::sqrt(s);
                 },
                 [](const Ball& d) { return d.radius; }},
      domain);
}

Domain shrink(const Domain& domain, double scale) {
  if (!(scale > 0.0)) throw DomainError("shrink: scale must be positive");
  return std::visit(
      Overloaded{[&](const Interval& d) -> Domain { return Interval{d.lo / scale, d.hi / scale}; },
                 [&](const Rectangle& d) -> Domain {
                   return Rectangle{d.x0 / scale, d.x1 / scale, d.y0 / scale, d.y1 / scale};
                 },
                 [&](const Disk& d) -> Domain { return Disk{d.radius / scale}; },
                 [&](const Box& d) -> Domain {
                   Box b;
                   for (int i = 0; i < 3; ++i) {
                     b.lo[i] = d.lo[i] / scale;
                     b.hi[i] = d.hi[i] / scale;
                   }
                   return b;
                 },
                 [&](const Ball& d) -> Domain { return Ball{d.radius / scale}; }},
      domain);
}

bool is_radial(const Domain& domain) {
  if (const auto* iv = std::get_if<Interval>(&domain)) return iv->lo == -iv->hi;
  return std::holds_alternative<Disk>(domain) || std::holds_alternative<Ball>(domain);
}

std::string describe(const Domain& domain) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const Interval& d) { os << "interval[" << d.lo << "," << d.hi << "]"; },
                        [&](const Rectangle& d) {
                          os << "rectangle[" << d.x0 << "," << d.x1 << "]x[" << d.y0 << ","
                             << d.y1 << "]";
                        },
                        [&](const Disk& d) { os << "disk(r=" << d.radius << ")"; },
                        [&](const Box& d) {
                          os << "box[" << d.lo[0] << "," << d.hi[0] << "]x[" << d.lo[1] << ","
                             << d.hi[1] << "]x[" << d.lo[2] << "," << d.hi[2] << "]";
                        },
                        [&](const Ball& d) { os << "ball(r=" << d.radius << ")"; }},
             domain);
  return os.str();
}

double unit_sphere_surface(int n) {
  using std::numbers::pi;
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: break;
  }
  if (n < 1) throw DomainError("unit_sphere_surface: dimension must be >= 1");
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace deforce
