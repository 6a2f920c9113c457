#pragma once

#include <array>
#include <limits>
#include <span>
#include <string>
#include <variant>

namespace deforce {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integration regions for the base plane. Points are passed to integrands
/// as spans whose length equals the region's dimension.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct Rectangle {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
};

/// Disk centred at the origin. radius may be infinite (the whole plane).
struct Disk {
  double radius = 1.0;
};

struct Box {
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
};

/// Ball centred at the origin. radius may be infinite.
struct Ball {
  double radius = 1.0;
};

using Domain = std::variant<Interval, Rectangle, Disk, Box, Ball>;

int dimension(const Domain& domain);

/// Lebesgue measure of the region; infinite for unbounded disks and balls.
double measure(const Domain& domain);

bool contains(const Domain& domain, std::span<const double> x);

/// Radius of the smallest origin-centred ball containing the region.
double outer_radius(const Domain& domain);

/// The region mapped by x -> x / scale.
Domain shrink(const Domain& domain, double scale);

/// True for origin-centred regions with rotational symmetry about the
/// origin: disks, balls, and intervals symmetric about zero.
bool is_radial(const Domain& domain);

std::string describe(const Domain& domain);

/// Area of the unit (n-1)-sphere: 2 for n=1, 2*pi for n=2, 4*pi for n=3.
double unit_sphere_surface(int n);

}  // namespace deforce
