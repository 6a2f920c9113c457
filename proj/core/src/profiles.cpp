#include "deforce/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "deforce/error.hpp"

namespace deforce {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::sphere: return "sphere";
    case ProfileKind::cylinder: return "cylinder";
    case ProfileKind::paraboloid: return "paraboloid";
    case ProfileKind::constant: return "constant";
    case ProfileKind::gaussian_bump: return "gaussian_bump";
    case ProfileKind::grid: return "grid";
    case ProfileKind::scaled: return "scaled";
  }
  return "unknown";
}

double ProfileSample::grad_norm2() const {
  return grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2];
}

double ProfileSample::hess_norm2() const {
  double s = 0.0;
  for (const auto& row : hess)
    for (double v : row) s += v * v;
  return s;
}

namespace detail {

class ProfileShape {
 public:
  virtual ~ProfileShape() = default;

  virtual ProfileKind kind() const = 0;
  virtual int base_dim() const = 0;
  virtual const Domain& planform() const = 0;
  virtual bool axisymmetric() const = 0;
  virtual bool has_hessian() const { return true; }
  virtual double min_gap() const = 0;
  virtual double max_gap() const = 0;
  virtual std::optional<double> curvature_radius() const { return std::nullopt; }
  virtual std::vector<double> length_scales() const { return {}; }
  virtual std::string describe() const = 0;

  virtual RadialSample radial(double) const {
    throw DomainError("profile " + describe() + " is not axisymmetric");
  }

  // Default evaluation for axisymmetric shapes.
  virtual ProfileSample eval(std::span<const double> x) const {
    const int n = base_dim();
    double rho2 = 0.0;
    for (int i = 0; i < n; ++i) rho2 += x[i] * x[i];
    const double rho = std::sqrt(rho2);
    const RadialSample r = radial(rho);
    ProfileSample s;
    s.psi = r.psi;
    std::array<double, 3> unit{};
    if (rho > 0.0)
      for (int i = 0; i < n; ++i) unit[i] = x[i] / rho;
    for (int i = 0; i < n; ++i) {
      s.grad[i] = r.d1 * unit[i];
      for (int j = 0; j < n; ++j) {
        const double uu = unit[i] * unit[j];
        s.hess[i][j] = r.d2 * uu + r.d1_over_rho * ((i == j ? 1.0 : 0.0) - uu);
      }
    }
    if (rho == 0.0)
      for (int i = 0; i < n; ++i) s.hess[i][i] = r.d2;
    return s;
  }
};

}  // namespace detail

namespace {

using detail::ProfileShape;

void require_positive(double v, const char* name, const char* who) {
  if (!(v > 0.0) || std::isnan(v))
    throw DomainError(std::string(who) + ": " + name + " must be positive");
}

Domain radial_planform(int n, double radius) {
  switch (n) {
    case 1: return Interval{-radius, radius};
    case 2: return Disk{radius};
    case 3: return Ball{radius};
    default: throw DomainError("base dimension must be 1, 2 or 3");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class SphereShape final : public ProfileShape {
 public:
  SphereShape(double a, double R, double rho_max, int n, SphereSheet sheet, bool cylinder)
      : a_(a), R_(R), rho_max_(rho_max), n_(n), sheet_(sheet), cylinder_(cylinder),
        planform_(radial_planform(n, rho_max)) {}

  ProfileKind kind() const override { return cylinder_ ? ProfileKind::cylinder : ProfileKind::sphere; }
  int base_dim() const override { return n_; }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return true; }

  double min_gap() const override {
    return sheet_ == SphereSheet::near ? a_ : radial(rho_max_).psi;
  }
  double max_gap() const override {
    return sheet_ == SphereSheet::near ? radial(rho_max_).psi : a_ + 2.0 * R_;
  }
  std::optional<double> curvature_radius() const override {
    if (sheet_ == SphereSheet::far) return std::nullopt;
    return R_;
  }
  std::vector<double> length_scales() const override {
    if (sheet_ == SphereSheet::far) return {0.5 * rho_max_};
    std::vector<double> out;
    for (double s = std::sqrt(2.0 * R_ * a_); s < rho_max_; s *= 4.0) out.push_back(s);
    return out;
  }
  std::string describe() const override {
    return std::string(cylinder_ ? "cylinder" : "sphere") + "(a=" + fmt(a_) + ", R=" + fmt(R_) +
           ", rho_max=" + fmt(rho_max_) + ", n=" + std::to_string(n_) +
           (sheet_ == SphereSheet::far ? ", far sheet" : "") + ")";
  }

  RadialSample radial(double rho) const override {
    const double s2 = (R_ - rho) * (R_ + rho);
    const double s = std::sqrt(s2);
    RadialSample r;
    if (sheet_ == SphereSheet::near) {
      // R - s written without cancellation.
      r.psi = a_ + rho * rho / (R_ + s);
      r.d1_over_rho = 1.0 / s;
      r.d1 = rho / s;
      r.d2 = R_ * R_ / (s2 * s);
    } else {
      r.psi = a_ + R_ + s;
      r.d1_over_rho = -1.0 / s;
      r.d1 = -rho / s;
      r.d2 = -R_ * R_ / (s2 * s);
    }
    return r;
  }

 private:
  double a_, R_, rho_max_;
  int n_;
  SphereSheet sheet_;
  bool cylinder_;
  Domain planform_;
};

class ParaboloidShape final : public ProfileShape {
 public:
  ParaboloidShape(double a, double sigma, double rho_max, int n)
      : a_(a), sigma_(sigma), rho_max_(rho_max), n_(n), planform_(radial_planform(n, rho_max)) {}

  ProfileKind kind() const override { return ProfileKind::paraboloid; }
  int base_dim() const override { return n_; }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return true; }
  double min_gap() const override { return a_; }
  double max_gap() const override { return radial(rho_max_).psi; }
  std::optional<double> curvature_radius() const override { return sigma_ * sigma_ / (2.0 * a_); }
  std::vector<double> length_scales() const override {
    std::vector<double> out;
    for (double s = sigma_; s < rho_max_ && out.size() < 4; s *= 4.0) out.push_back(s);
    return out;
  }
  std::string describe() const override {
    return "paraboloid(a=" + fmt(a_) + ", sigma=" + fmt(sigma_) + ", rho_max=" + fmt(rho_max_) +
           ", n=" + std::to_string(n_) + ")";
  }
  RadialSample radial(double rho) const override {
    const double k = a_ / (sigma_ * sigma_);
    return {a_ + k * rho * rho, 2.0 * k * rho, 2.0 * k, 2.0 * k};
  }

 private:
  double a_, sigma_, rho_max_;
  int n_;
  Domain planform_;
};

class ConstantShape final : public ProfileShape {
 public:
  ConstantShape(double a, Domain planform) : a_(a), planform_(std::move(planform)) {}

  ProfileKind kind() const override { return ProfileKind::constant; }
  int base_dim() const override { return dimension(planform_); }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return is_radial(planform_); }
  double min_gap() const override { return a_; }
  double max_gap() const override { return a_; }
  std::string describe() const override {
    return "constant(a=" + fmt(a_) + ", planform=" + deforce::describe(planform_) + ")";
  }
  RadialSample radial(double) const override { return {a_, 0.0, 0.0, 0.0}; }
  ProfileSample eval(std::span<const double>) const override {
    ProfileSample s;
    s.psi = a_;
    return s;
  }

 private:
  double a_;
  Domain planform_;
};

class GaussianBumpShape final : public ProfileShape {
 public:
  GaussianBumpShape(double height, double amplitude, double width, double rho_max)
      : h_(height), A_(amplitude), w_(width), rho_max_(rho_max), planform_(Disk{rho_max}) {}

  ProfileKind kind() const override { return ProfileKind::gaussian_bump; }
  int base_dim() const override { return 2; }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return true; }
  double min_gap() const override {
    return std::min(radial(0.0).psi, radial(rho_max_).psi);
  }
  double max_gap() const override {
    return std::max(radial(0.0).psi, radial(rho_max_).psi);
  }
  std::optional<double> curvature_radius() const override {
    if (A_ >= 0.0) return std::nullopt;
    return w_ * w_ / (-2.0 * A_);
  }
  std::vector<double> length_scales() const override {
    std::vector<double> out;
    for (double s : {0.5 * w_, w_, 2.0 * w_, 4.0 * w_})
      if (s < rho_max_) out.push_back(s);
    return out;
  }
  std::string describe() const override {
    return "gaussian_bump(height=" + fmt(h_) + ", amplitude=" + fmt(A_) + ", width=" + fmt(w_) +
           ", rho_max=" + fmt(rho_max_) + ")";
  }
  RadialSample radial(double rho) const override {
    const double w2 = w_ * w_;
    const double e = A_ * std::exp(-rho * rho / w2);
    const double d1r = -2.0 * e / w2;
    return {h_ + e, d1r * rho, e * (4.0 * rho * rho / (w2 * w2) - 2.0 / w2), d1r};
  }

 private:
  double h_, A_, w_, rho_max_;
  Domain planform_;
};

// Second-order derivative operators along one axis of a grid.
double first_diff(const std::vector<double>& f, int i, int n, int stride, int offset, double h) {
  auto at = [&](int k) { return f[offset + k * stride]; };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

double second_diff(const std::vector<double>& f, int i, int n, int stride, int offset, double h) {
  auto at = [&](int k) { return f[offset + k * stride]; };
  if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
  if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h);
  return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
}

class GridShape final : public ProfileShape {
 public:
  explicit GridShape(GridData g) : g_(std::move(g)) {
    planform_ = Rectangle{g_.x0, g_.x0 + (g_.nx - 1) * g_.dx, g_.y0, g_.y0 + (g_.ny - 1) * g_.dy};
    hessian_ = g_.nx >= 4 && g_.ny >= 4;
    const std::size_t count = g_.values.size();
    gx_.resize(count);
    gy_.resize(count);
    for (int i = 0; i < g_.nx; ++i)
      for (int j = 0; j < g_.ny; ++j) {
        gx_[idx(i, j)] = first_diff(g_.values, i, g_.nx, g_.ny, j, g_.dx);
        gy_[idx(i, j)] = first_diff(g_.values, j, g_.ny, 1, i * g_.ny, g_.dy);
      }
    if (hessian_) {
      hxx_.resize(count);
      hyy_.resize(count);
      hxy_.resize(count);
      for (int i = 0; i < g_.nx; ++i)
        for (int j = 0; j < g_.ny; ++j) {
          hxx_[idx(i, j)] = second_diff(g_.values, i, g_.nx, g_.ny, j, g_.dx);
          hyy_[idx(i, j)] = second_diff(g_.values, j, g_.ny, 1, i * g_.ny, g_.dy);
          hxy_[idx(i, j)] = first_diff(gx_, j, g_.ny, 1, i * g_.ny, g_.dy);
        }
    }
    const auto [lo, hi] = std::minmax_element(g_.values.begin(), g_.values.end());
    min_ = *lo;
    max_ = *hi;
  }

  ProfileKind kind() const override { return ProfileKind::grid; }
  int base_dim() const override { return 2; }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return false; }
  bool has_hessian() const override { return hessian_; }
  double min_gap() const override { return min_; }
  double max_gap() const override { return max_; }
  std::string describe() const override {
    return "grid(" + std::to_string(g_.nx) + "x" + std::to_string(g_.ny) + ", dx=" + fmt(g_.dx) +
           ", dy=" + fmt(g_.dy) + ")";
  }

  ProfileSample eval(std::span<const double> x) const override {
    const double u = std::clamp((x[0] - g_.x0) / g_.dx, 0.0, g_.nx - 1.0);
    const double v = std::clamp((x[1] - g_.y0) / g_.dy, 0.0, g_.ny - 1.0);
    const int i = std::min(static_cast<int>(u), g_.nx - 2);
    const int j = std::min(static_cast<int>(v), g_.ny - 2);
    const double fu = u - i, fv = v - j;
    auto lerp = [&](const std::vector<double>& f) {
      return (1 - fu) * (1 - fv) * f[idx(i, j)] + fu * (1 - fv) * f[idx(i + 1, j)] +
             (1 - fu) * fv * f[idx(i, j + 1)] + fu * fv * f[idx(i + 1, j + 1)];
    };
    ProfileSample s;
    s.psi = lerp(g_.values);
    s.grad[0] = lerp(gx_);
    s.grad[1] = lerp(gy_);
    if (hessian_) {
      s.hess[0][0] = lerp(hxx_);
      s.hess[1][1] = lerp(hyy_);
      s.hess[0][1] = s.hess[1][0] = lerp(hxy_);
    }
    return s;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * g_.ny + j; }

  GridData g_;
  Domain planform_;
  bool hessian_ = false;
  std::vector<double> gx_, gy_, hxx_, hyy_, hxy_;
  double min_ = 0.0, max_ = 0.0;
};

class ScaledShape final : public ProfileShape {
 public:
  ScaledShape(std::shared_ptr<const ProfileShape> inner, double lambda)
      : inner_(std::move(inner)), lambda_(lambda),
        planform_(shrink(inner_->planform(), lambda)) {}

  ProfileKind kind() const override { return ProfileKind::scaled; }
  int base_dim() const override { return inner_->base_dim(); }
  const Domain& planform() const override { return planform_; }
  bool axisymmetric() const override { return inner_->axisymmetric(); }
  bool has_hessian() const override { return inner_->has_hessian(); }
  double min_gap() const override { return inner_->min_gap(); }
  double max_gap() const override { return inner_->max_gap(); }
  std::optional<double> curvature_radius() const override {
    auto r = inner_->curvature_radius();
    if (r) *r /= lambda_ * lambda_;
    return r;
  }
  std::vector<double> length_scales() const override {
    auto s = inner_->length_scales();
    for (double& v : s) v /= lambda_;
    return s;
  }
  std::string describe() const override {
    return "scaled(lambda=" + fmt(lambda_) + ", " + inner_->describe() + ")";
  }
  RadialSample radial(double rho) const override {
    RadialSample r = inner_->radial(lambda_ * rho);
    r.d1 *= lambda_;
    r.d2 *= lambda_ * lambda_;
    r.d1_over_rho *= lambda_ * lambda_;
    return r;
  }
  ProfileSample eval(std::span<const double> x) const override {
    std::array<double, 3> y{};
    const int n = base_dim();
    for (int i = 0; i < n; ++i) y[i] = lambda_ * x[i];
    ProfileSample s = inner_->eval(std::span<const double>(y.data(), n));
    for (int i = 0; i < n; ++i) {
      s.grad[i] *= lambda_;
      for (int j = 0; j < n; ++j) s.hess[i][j] *= lambda_ * lambda_;
    }
    return s;
  }

 private:
  std::shared_ptr<const ProfileShape> inner_;
  double lambda_;
  Domain planform_;
};

bool inside_with_slack(const Domain& d, std::span<const double> x) {
  if (contains(d, x)) return true;
  const double r = outer_radius(d);
  const double slack = 1e-12 * (std::isfinite(r) ? std::max(r, 1.0) : 1.0);
  std::array<double, 3> y{};
  for (std::size_t i = 0; i < x.size() && i < 3; ++i) y[i] = x[i];
  // Pull the point towards the origin by the slack and retest.
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) norm += y[i] * y[i];
  norm = std::sqrt(norm);
  if (norm == 0.0) return false;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] *= std::max(0.0, 1.0 - slack / norm);
  if (contains(d, std::span<const double>(y.data(), x.size()))) return true;
  // Rectangles and boxes: clamp coordinate-wise.
  if (const auto* rct = std::get_if<Rectangle>(&d)) {
    return x[0] >= rct->x0 - slack && x[0] <= rct->x1 + slack && x[1] >= rct->y0 - slack &&
           x[1] <= rct->y1 + slack;
  }
  if (const auto* box = std::get_if<Box>(&d)) {
    for (int i = 0; i < 3; ++i)
      if (x[i] < box->lo[i] - slack || x[i] > box->hi[i] + slack) return false;
    return true;
  }
  if (const auto* iv = std::get_if<Interval>(&d)) {
    return x[0] >= iv->lo - slack && x[0] <= iv->hi + slack;
  }
  return false;
}

}  // namespace

SurfaceProfile::SurfaceProfile(std::shared_ptr<const detail::ProfileShape> shape)
    : shape_(std::move(shape)) {}

ProfileKind SurfaceProfile::kind() const { return shape_->kind(); }
int SurfaceProfile::base_dim() const { return shape_->base_dim(); }
const Domain& SurfaceProfile::planform() const { return shape_->planform(); }
bool SurfaceProfile::axisymmetric() const { return shape_->axisymmetric(); }
bool SurfaceProfile::has_hessian() const { return shape_->has_hessian(); }
double SurfaceProfile::min_gap() const { return shape_->min_gap(); }
double SurfaceProfile::max_gap() const { return shape_->max_gap(); }
std::optional<double> SurfaceProfile::curvature_radius() const { return shape_->curvature_radius(); }
std::vector<double> SurfaceProfile::length_scales() const { return shape_->length_scales(); }
std::string SurfaceProfile::describe() const { return shape_->describe(); }

ProfileSample SurfaceProfile::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != base_dim())
    throw DomainError("eval_profile: point dimension " + std::to_string(x.size()) +
                      " does not match base dimension " + std::to_string(base_dim()));
  if (!inside_with_slack(planform(), x))
    throw DomainError("eval_profile: point outside planform " + deforce::describe(planform()));
  return shape_->eval(x);
}

RadialSample SurfaceProfile::eval_radial(double rho) const {
  if (!axisymmetric()) throw DomainError("eval_radial: profile " + describe() + " is not axisymmetric");
  const double r = outer_radius(planform());
  if (rho < 0.0 || rho > r * (1.0 + 1e-12))
    throw DomainError("eval_radial: rho = " + fmt(rho) + " outside planform " +
                      deforce::describe(planform()));
  return shape_->radial(rho);
}

SurfaceProfile make_sphere(double a, double radius, double rho_max, int base_dim,
                           SphereSheet sheet) {
  require_positive(a, "a", "make_sphere");
  require_positive(radius, "R", "make_sphere");
  require_positive(rho_max, "rho_max", "make_sphere");
  if (!(rho_max < radius))
    throw DomainError("make_sphere: planform radius rho_max must be strictly less than R "
                      "(the profile derivative is singular at the rim)");
  if (base_dim < 1 || base_dim > 3) throw DomainError("make_sphere: base_dim must be 1, 2 or 3");
  return SurfaceProfile(std::make_shared<SphereShape>(a, radius, rho_max, base_dim, sheet, false));
}

SurfaceProfile make_cylinder(double a, double radius, double x_max) {
  require_positive(a, "a", "make_cylinder");
  require_positive(radius, "R", "make_cylinder");
  require_positive(x_max, "x_max", "make_cylinder");
  if (!(x_max < radius))
    throw DomainError("make_cylinder: planform half-width x_max must be strictly less than R");
  return SurfaceProfile(
      std::make_shared<SphereShape>(a, radius, x_max, 1, SphereSheet::near, true));
}

SurfaceProfile make_paraboloid(double a, double sigma, double rho_max, int base_dim) {
  require_positive(a, "a", "make_paraboloid");
  require_positive(sigma, "sigma", "make_paraboloid");
  require_positive(rho_max, "rho_max", "make_paraboloid");
  if (base_dim < 1 || base_dim > 3) throw DomainError("make_paraboloid: base_dim must be 1, 2 or 3");
  return SurfaceProfile(std::make_shared<ParaboloidShape>(a, sigma, rho_max, base_dim));
}

SurfaceProfile make_constant(double a, const Domain& planform) {
  require_positive(a, "a", "make_constant");
  if (!(measure(planform) > 0.0)) throw DomainError("make_constant: planform has no area");
  return SurfaceProfile(std::make_shared<ConstantShape>(a, planform));
}

SurfaceProfile make_gaussian_bump(double height, double amplitude, double width, double rho_max) {
  require_positive(height, "height", "make_gaussian_bump");
  require_positive(width, "width", "make_gaussian_bump");
  require_positive(rho_max, "rho_max", "make_gaussian_bump");
  if (!std::isfinite(amplitude)) throw DomainError("make_gaussian_bump: amplitude must be finite");
  if (!(height + std::min(amplitude, 0.0) > 0.0))
    throw DomainError("make_gaussian_bump: height + amplitude must stay positive (surfaces touch)");
  return SurfaceProfile(std::make_shared<GaussianBumpShape>(height, amplitude, width, rho_max));
}

SurfaceProfile make_grid(GridData data) {
  if (data.nx < 3 || data.ny < 3) throw DomainError("make_grid: need at least 3 nodes per axis");
  require_positive(data.dx, "dx", "make_grid");
  require_positive(data.dy, "dy", "make_grid");
  if (data.values.size() != static_cast<std::size_t>(data.nx) * data.ny)
    throw DomainError("make_grid: value count does not match nx * ny");
  for (double v : data.values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("make_grid: every height must be finite and positive");
  return SurfaceProfile(std::make_shared<GridShape>(std::move(data)));
}

GridData read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("read_grid_csv: cannot open " + path);
  std::string line;
  double dx = 0.0, dy = 0.0;
  bool have_spacing = false;
  std::vector<std::array<double, 3>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      const auto pos = line.find("spacing:");
      if (pos != std::string::npos) {
        std::istringstream ss(line.substr(pos + 8));
        if (!(ss >> dx >> dy)) throw DomainError("read_grid_csv: malformed spacing header");
        have_spacing = true;
      }
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::array<double, 3> r{};
    if (!(ss >> r[0] >> r[1] >> r[2])) {
      if (rows.empty()) continue;  // column header
      throw DomainError("read_grid_csv: malformed row at line " + std::to_string(line_no));
    }
    rows.push_back(r);
  }
  if (!have_spacing) throw DomainError("read_grid_csv: missing '# spacing: dx dy' header");
  require_positive(dx, "dx", "read_grid_csv");
  require_positive(dy, "dy", "read_grid_csv");
  if (rows.empty()) throw DomainError("read_grid_csv: no data rows");

  double x0 = rows[0][0], y0 = rows[0][1], x1 = x0, y1 = y0;
  for (const auto& r : rows) {
    x0 = std::min(x0, r[0]);
    x1 = std::max(x1, r[0]);
    y0 = std::min(y0, r[1]);
    y1 = std::max(y1, r[1]);
  }
  GridData g;
  g.x0 = x0;
  g.y0 = y0;
  g.dx = dx;
  g.dy = dy;
  g.nx = static_cast<int>(std::lround((x1 - x0) / dx)) + 1;
  g.ny = static_cast<int>(std::lround((y1 - y0) / dy)) + 1;
  g.values.assign(static_cast<std::size_t>(g.nx) * g.ny, std::nan(""));
  for (const auto& r : rows) {
    const double fi = (r[0] - x0) / dx, fj = (r[1] - y0) / dy;
    const long i = std::lround(fi), j = std::lround(fj);
    if (std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6)
      throw DomainError("read_grid_csv: point (" + fmt(r[0]) + ", " + fmt(r[1]) +
                        ") is off the declared spacing");
    g.values[static_cast<std::size_t>(i) * g.ny + j] = r[2];
  }
  for (double v : g.values)
    if (std::isnan(v)) throw DomainError("read_grid_csv: grid is incomplete");
  return g;
}

SurfaceProfile scale_lateral(const SurfaceProfile& profile, double lambda) {
  require_positive(lambda, "lambda", "scale_lateral");
  if (!std::isfinite(lambda)) throw DomainError("scale_lateral: lambda must be finite");
  return SurfaceProfile(std::make_shared<ScaledShape>(profile.shape_ptr(), lambda));
}

}  // namespace deforce
