#include "config.hpp"

#include <algorithm>
#include <deforce/error.hpp>
#include <fstream>
#include <sstream>

namespace deforce::cli {

Section::Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
  if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
}

std::string Section::where(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

const json& Section::at(const std::string& key) {
  if (!node_.contains(key)) throw ConfigError(where(key) + ": required key is missing");
  if (std::find(used_.begin(), used_.end(), key) == used_.end()) used_.push_back(key);
  return node_.at(key);
}

double Section::number(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
  const double d = v.get<double>();
  resolved_[key] = d;
  return d;
}

double Section::number(const std::string& key, double fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  return number(key);
}

std::optional<double> Section::optional_number(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return number(key);
}

int Section::integer(const std::string& key, int fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  const json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
  const int i = v.get<int>();
  resolved_[key] = i;
  return i;
}

bool Section::boolean(const std::string& key, bool fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
  resolved_[key] = v.get<bool>();
  return v.get<bool>();
}

std::string Section::string(const std::string& key) {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
  resolved_[key] = v;
  return v.get<std::string>();
}

std::string Section::string(const std::string& key, const std::string& fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  return string(key);
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  resolved_[key] = out;
  return out;
}

std::vector<std::string> Section::strings(const std::string& key,
                                          const std::vector<std::string>& fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of strings");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) throw ConfigError(where(key) + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  resolved_[key] = out;
  return out;
}

Section Section::child(const std::string& key) { return Section(at(key), where(key)); }

const json& Section::raw(const std::string& key) {
  const json& v = at(key);
  resolved_[key] = v;
  return v;
}

void Section::put(const std::string& key, json value) { resolved_[key] = std::move(value); }

void Section::finish() const {
  for (const auto& [key, value] : node_.items()) {
    (void)value;
    if (std::find(used_.begin(), used_.end(), key) == used_.end())
      throw ConfigError(where(key) + ": unknown key");
  }
}

namespace {

// Wraps core DomainErrors raised while building objects from the config.
template <typename F>
auto building(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::optional<double> planform_radius(Section& s, double R) {
  const bool has_abs = s.has("rho_max"), has_frac = s.has("rho_m_frac");
  if (has_abs && has_frac)
    throw ConfigError(s.path() + ": give either rho_max or rho_m_frac, not both");
  if (has_abs) return s.number("rho_max");
  return s.number("rho_m_frac", 0.9) * R;
}

}  // namespace

Domain parse_domain(Section& s) {
  const std::string type = s.string("type");
  Domain d;
  if (type == "interval") {
    d = Interval{s.number("lo"), s.number("hi")};
  } else if (type == "rectangle") {
    d = Rectangle{s.number("x0"), s.number("x1"), s.number("y0"), s.number("y1")};
  } else if (type == "disk") {
    d = Disk{s.number("radius")};
  } else if (type == "ball") {
    d = Ball{s.number("radius")};
  } else if (type == "box") {
    const auto lo = s.numbers("lo", {}), hi = s.numbers("hi", {});
    if (lo.size() != 3 || hi.size() != 3) throw ConfigError(s.path() + ": box needs 3-vectors lo and hi");
    d = Box{{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}};
  } else {
    throw ConfigError(s.path() + ".type: unknown planform '" + type +
                      "' (interval, rectangle, disk, ball, box)");
  }
  s.finish();
  return d;
}

SurfaceProfile parse_profile(Section& s) {
  const std::string kind = s.string("kind");
  const std::string& path = s.path();
  std::optional<SurfaceProfile> p;
  if (kind == "sphere") {
    const double a = s.number("a"), R = s.number("R");
    const double rho = *planform_radius(s, R);
    const int n = s.integer("base_dim", 2);
    const std::string sheet = s.string("sheet", "near");
    if (sheet != "near" && sheet != "far") throw ConfigError(path + ".sheet: expected near or far");
    p = building(path, [&] {
      return make_sphere(a, R, rho, n, sheet == "near" ? SphereSheet::near : SphereSheet::far);
    });
  } else if (kind == "cylinder") {
    const double a = s.number("a"), R = s.number("R");
    double x_max;
    if (s.has("x_max")) {
      if (s.has("rho_m_frac")) throw ConfigError(path + ": give either x_max or rho_m_frac, not both");
      x_max = s.number("x_max");
    } else {
      x_max = s.number("rho_m_frac", 0.9) * R;
    }
    p = building(path, [&] { return make_cylinder(a, R, x_max); });
  } else if (kind == "paraboloid") {
    const double a = s.number("a"), sigma = s.number("sigma");
    const double rho = s.has("rho_max") ? s.number("rho_max") : kInfinity;
    const int n = s.integer("base_dim", 2);
    p = building(path, [&] { return make_paraboloid(a, sigma, rho, n); });
  } else if (kind == "constant") {
    const double a = s.number("a");
    Section ps = s.child("planform");
    const Domain d = parse_domain(ps);
    s.put("planform", ps.resolved());
    p = building(path, [&] { return make_constant(a, d); });
  } else if (kind == "gaussian_bump") {
    const double h = s.number("height"), amp = s.number("amplitude"), w = s.number("width");
    const double rho = s.number("rho_max");
    p = building(path, [&] { return make_gaussian_bump(h, amp, w, rho); });
  } else if (kind == "grid") {
    const std::string file = s.string("path");
    p = building(path, [&] { return make_grid(read_grid_csv(file)); });
  } else {
    throw ConfigError(path + ".kind: unknown profile kind '" + kind +
                      "' (sphere, cylinder, paraboloid, constant, gaussian_bump, grid)");
  }
  if (s.has("scale")) {
    const double lambda = s.number("scale");
    p = building(path, [&] { return scale_lateral(*p, lambda); });
  }
  s.finish();
  return *p;
}

InteractionKernel parse_kernel(Section& s, const QuadratureSpec& spec) {
  const std::string name = s.string("name");
  const std::string& path = s.path();
  auto boundary = [&] {
    const std::string bc = s.string("bc", "dirichlet");
    if (bc == "dirichlet") return Boundary::dirichlet;
    if (bc == "neumann") return Boundary::neumann;
    throw ConfigError(path + ".bc: expected dirichlet or neumann");
  };
  std::optional<InteractionKernel> k;
  if (name == "casimir_scalar") {
    const Boundary bc = boundary();
    k = kernel_casimir_scalar(bc);
  } else if (name == "casimir_em") {
    k = kernel_casimir_em();
  } else if (name == "electrostatic") {
    const double V0 = s.number("V0", 1.0), eps0 = s.number("eps0", 1.0);
    k = building(path, [&] { return kernel_electrostatic(V0, eps0); });
  } else if (name == "highT_dirichlet") {
    const double beta = s.number("beta", 1.0);
    const int n = s.integer("plane_dim", 2);
    k = building(path, [&] { return kernel_highT_dirichlet(beta, n); });
  } else if (name == "power_law") {
    const double v0 = s.number("v0"), z0 = s.number("z0"), p = s.number("p");
    const std::optional<double> c0 = s.optional_number("c0");
    const int n = s.integer("plane_dim", 0);
    k = building(path, [&] { return kernel_power_law(v0, z0, p, c0, n); });
  } else if (name == "patch") {
    const double V_rms = s.number("V_rms", 1.0), ell = s.number("ell"), eps0 = s.number("eps0", 1.0);
    const bool normalize = s.boolean("normalize", false);
    const std::string corr_name = s.string("correlation", "gaussian");
    PatchCorrelation corr = building(path, [&] {
      if (corr_name == "gaussian") return PatchCorrelation::gaussian();
      if (corr_name == "exponential") return PatchCorrelation::exponential();
      return PatchCorrelation::from_csv(corr_name);
    });
    if (normalize) corr = building(path, [&] { return corr.normalized(spec); });
    k = building(path, [&] { return kernel_patch(corr, V_rms, ell, eps0, spec); });
  } else {
    throw ConfigError(path + ".name: unknown kernel '" + name +
                      "' (casimir_scalar, casimir_em, electrostatic, highT_dirichlet, "
                      "power_law, patch)");
  }
  s.finish();
  return *k;
}

QuadratureSpec parse_quad(Section& s) {
  QuadratureSpec q;
  q.rel_tol = s.number("rel_tol", q.rel_tol);
  q.abs_tol = s.number("abs_tol", q.abs_tol);
  q.max_subdivisions = s.integer("max_subdiv", q.max_subdivisions);
  q.axisymmetric_reduction = s.boolean("axisymmetric_reduction", q.axisymmetric_reduction);
  s.finish();
  building(s.path(), [&] {
    q.validate();
    return 0;
  });
  return q;
}

GammaFitOptions parse_gamma(Section& s) {
  GammaFitOptions o;
  const std::string family = s.string("family", "sphere");
  if (family == "sphere") {
    o.family = Family::sphere;
  } else if (family == "cylinder") {
    o.family = Family::cylinder;
  } else {
    throw ConfigError(s.path() + ".family: expected sphere or cylinder");
  }
  o.R = s.number("R", o.R);
  o.ladder = s.numbers("ladder", o.ladder);
  const std::string model = s.string("model", "linear");
  if (model == "linear") {
    o.model = FitModel::linear;
  } else if (model == "log") {
    o.model = FitModel::log;
  } else {
    throw ConfigError(s.path() + ".model: expected linear or log");
  }
  o.rho_m_frac = s.number("rho_m_frac", o.rho_m_frac);
  o.rho_m_frac_alt = s.number("rho_m_frac_alt", o.rho_m_frac_alt);
  o.max_x = s.number("max_x", o.max_x);
  o.max_exponent = s.number("max_exponent", o.max_exponent);
  o.fit_tolerance = s.number("fit_tolerance", o.fit_tolerance);
  o.reference = s.optional_number("reference");
  s.finish();
  if (o.ladder.size() < 4)
    throw ConfigError(s.path() + ".ladder: needs at least 4 points, got " +
                      std::to_string(o.ladder.size()));
  return o;
}

JacobianOptions parse_jacobian(Section& s) {
  JacobianOptions o;
  o.bins = s.integer("bins", o.bins);
  o.h_min = s.optional_number("h_min");
  o.h_max = s.optional_number("h_max");
  o.window_lo = s.optional_number("window_lo");
  o.window_hi = s.optional_number("window_hi");
  o.cells = s.integer("cells", o.cells);
  o.refine = s.integer("refine", o.refine);
  o.prefer_level_sets = s.boolean("prefer_level_sets", o.prefer_level_sets);
  s.finish();
  return o;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": top level must be an object");
  // A manifest from an earlier run.
  if (doc.contains("manifest_version")) {
    if (!doc.contains("config")) throw ConfigError(path + ": manifest has no config member");
    doc = doc.at("config");
  }
  return doc;
}

namespace {

void set_rho_m_frac(json& section, double frac) {
  section["rho_m_frac"] = frac;
  section.erase("rho_max");
  section.erase("x_max");
}

}  // namespace

json normalize_config(json doc, const Overrides& ov) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (!doc.contains("schema_version")) doc["schema_version"] = kSchemaVersion;
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion));
  if (ov.quad_tol) doc["quad"]["rel_tol"] = *ov.quad_tol;
  if (ov.rho_m_frac) {
    std::vector<json*> profiles;
    if (doc.contains("profile")) profiles.push_back(&doc["profile"]);
    for (const char* cmd : {"sei", "compare"})
      if (doc.contains(cmd) && doc[cmd].is_object() && doc[cmd].contains("far_profile"))
        profiles.push_back(&doc[cmd]["far_profile"]);
    for (json* sec : profiles) {
      if (!sec->is_object() || !sec->contains("kind")) continue;
      const json kind = (*sec)["kind"];
      if (kind == "sphere" || kind == "cylinder") set_rho_m_frac(*sec, *ov.rho_m_frac);
    }
    for (const char* key : {"gamma", "sweep"}) doc[key]["rho_m_frac"] = *ov.rho_m_frac;
  }
  return doc;
}

}  // namespace deforce::cli
