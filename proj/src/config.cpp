#include "decolight/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "decolight/csv.hpp"
#include "decolight/error.hpp"

namespace decolight {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokens(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const char* first = s.data();
  if (first != end && *first == '+') ++first;
  const auto res = std::from_chars(first, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument("expected a number, got '" + s + "'");
  if (!std::isfinite(v)) throw std::invalid_argument("expected a finite number, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  const std::string v = lower(s);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

// Splits a trailing "m" unit (as its own token or glued to the number).
bool strip_meters(std::vector<std::string>& t) {
  if (t.empty()) return false;
  if (lower(t.back()) == "m") {
    t.pop_back();
    return true;
  }
  std::string& last = t.back();
  if (last.size() > 1 && (last.back() == 'm' || last.back() == 'M')) {
    last.pop_back();
    return true;
  }
  return false;
}

Length to_length(const std::string& s) {
  auto t = tokens(s);
  const bool m = strip_meters(t);
  if (t.size() != 1) throw std::invalid_argument("expected one length, got '" + s + "'");
  return {to_double(t[0]), m};
}

LengthVec to_length_vec(const std::string& s) {
  auto t = tokens(s);
  const bool m = strip_meters(t);
  if (t.size() != 3) throw std::invalid_argument("expected three components, got '" + s + "'");
  return {Vec3(to_double(t[0]), to_double(t[1]), to_double(t[2])), m};
}

Vec3 to_vec3(const std::string& s) {
  const auto t = tokens(s);
  if (t.size() != 3) throw std::invalid_argument("expected three components, got '" + s + "'");
  return {to_double(t[0]), to_double(t[1]), to_double(t[2])};
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : tokens(s)) out.push_back(to_double(t));
  return out;
}

std::string num(double x) { return format_number(x); }

std::string emit_length(const Length& l) { return num(l.value) + (l.meters ? " m" : ""); }

std::string emit_vec(const Vec3& v) { return num(v.x()) + " " + num(v.y()) + " " + num(v.z()); }

std::string emit_length_vec(const LengthVec& l) { return emit_vec(l.value) + (l.meters ? " m" : ""); }

std::string emit_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
  return s;
}

template <class E>
E to_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> names) {
  const std::string v = lower(trim(s));
  std::string allowed;
  for (const auto& [n, e] : names) {
    if (v == n) return e;
    allowed += (allowed.empty() ? "" : "|") + std::string(n);
  }
  throw std::invalid_argument("expected " + allowed + ", got '" + s + "'");
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"scales", "lambda0", [](RunConfig& c, const std::string& v) { c.lambda0 = to_length(v).value; },
       [](const RunConfig& c) { return num(c.lambda0) + " m"; }},
      {"scales", "gamma0", [](RunConfig& c, const std::string& v) { c.gamma0 = to_double(v); },
       [](const RunConfig& c) { return num(c.gamma0); }},

      {"laser", "geometry",
       [](RunConfig& c, const std::string& v) {
         c.geometry = to_enum<Geometry>(v, {{"running", Geometry::Running}, {"standing", Geometry::Standing}});
       },
       [](const RunConfig& c) { return std::string(c.geometry == Geometry::Running ? "running" : "standing"); }},
      {"laser", "detuning", [](RunConfig& c, const std::string& v) { c.detuning = to_double(v); },
       [](const RunConfig& c) { return num(c.detuning); }},
      {"laser", "detuning_convention",
       [](RunConfig& c, const std::string& v) {
         c.detuning_convention = to_enum<DetuningConvention>(
             v, {{"frequency", DetuningConvention::Frequency}, {"angular", DetuningConvention::Angular}});
       },
       [](const RunConfig& c) {
         return std::string(c.detuning_convention == DetuningConvention::Frequency ? "frequency" : "angular");
       }},
      {"laser", "rabi_over_detuning", [](RunConfig& c, const std::string& v) { c.rabi_over_detuning = to_double(v); },
       [](const RunConfig& c) { return num(c.rabi_over_detuning); }},
      {"laser", "amplitude", [](RunConfig& c, const std::string& v) { c.amplitude = to_double(v); },
       [](const RunConfig& c) { return num(c.amplitude); }},
      {"laser", "amplitude_phase", [](RunConfig& c, const std::string& v) { c.amplitude_phase = to_double(v); },
       [](const RunConfig& c) { return num(c.amplitude_phase); }},
      {"laser", "wavenumber",
       [](RunConfig& c, const std::string& v) {
         if (lower(trim(v)) == "auto")
           c.wavenumber.reset();
         else
           c.wavenumber = to_double(trim(v));
       },
       [](const RunConfig& c) { return c.wavenumber ? num(*c.wavenumber) : std::string("auto"); }},

      {"condensate", "width", [](RunConfig& c, const std::string& v) { c.width = to_length(v); },
       [](const RunConfig& c) { return emit_length(c.width); }},
      {"condensate", "atom_number", [](RunConfig& c, const std::string& v) { c.atom_number = to_double(v); },
       [](const RunConfig& c) { return num(c.atom_number); }},
      {"condensate", "center", [](RunConfig& c, const std::string& v) { c.center = to_length_vec(v); },
       [](const RunConfig& c) { return emit_length_vec(c.center); }},

      {"dipole", "direction", [](RunConfig& c, const std::string& v) { c.dipole = to_vec3(v); },
       [](const RunConfig& c) { return emit_vec(c.dipole); }},

      {"quadrature", "method",
       [](RunConfig& c, const std::string& v) {
         c.quadrature.method = to_enum<QuadratureMethod>(
             v, {{"gauss_hermite", QuadratureMethod::GaussHermite}, {"adaptive", QuadratureMethod::Adaptive}});
       },
       [](const RunConfig& c) {
         return std::string(c.quadrature.method == QuadratureMethod::GaussHermite ? "gauss_hermite" : "adaptive");
       }},
      {"quadrature", "order", [](RunConfig& c, const std::string& v) { c.quadrature.order = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.quadrature.order); }},
      {"quadrature", "tolerance", [](RunConfig& c, const std::string& v) { c.quadrature.tolerance = to_double(v); },
       [](const RunConfig& c) { return num(c.quadrature.tolerance); }},
      {"quadrature", "panel_nodes", [](RunConfig& c, const std::string& v) { c.quadrature.panel_nodes = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.quadrature.panel_nodes); }},
      {"quadrature", "reduce_axisymmetric",
       [](RunConfig& c, const std::string& v) { c.quadrature.reduce_axisymmetric = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.quadrature.reduce_axisymmetric ? "true" : "false"); }},

      {"kernel", "u_max", [](RunConfig& c, const std::string& v) { c.u_max = to_double(v); },
       [](const RunConfig& c) { return num(c.u_max); }},
      {"kernel", "u_samples", [](RunConfig& c, const std::string& v) { c.u_samples = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.u_samples); }},
      {"kernel", "theta_samples", [](RunConfig& c, const std::string& v) { c.theta_samples = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.theta_samples); }},

      {"decay", "position", [](RunConfig& c, const std::string& v) { c.position = to_length_vec(v); },
       [](const RunConfig& c) { return emit_length_vec(c.position); }},
      {"decay", "t_max", [](RunConfig& c, const std::string& v) { c.t_max = to_double(v); },
       [](const RunConfig& c) { return num(c.t_max); }},
      {"decay", "t_samples", [](RunConfig& c, const std::string& v) { c.t_samples = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.t_samples); }},
      {"decay", "time_unit",
       [](RunConfig& c, const std::string& v) {
         c.time_unit = to_enum<TimeUnit>(v, {{"gamma_d", TimeUnit::GammaD}, {"gamma0", TimeUnit::Gamma0}});
       },
       [](const RunConfig& c) { return std::string(c.time_unit == TimeUnit::GammaD ? "gamma_d" : "gamma0"); }},

      {"profile", "z_min", [](RunConfig& c, const std::string& v) { c.z_min = to_double(v); },
       [](const RunConfig& c) { return num(c.z_min); }},
      {"profile", "z_max", [](RunConfig& c, const std::string& v) { c.z_max = to_double(v); },
       [](const RunConfig& c) { return num(c.z_max); }},
      {"profile", "z_samples", [](RunConfig& c, const std::string& v) { c.z_samples = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.z_samples); }},

      {"oracle", "sites", [](RunConfig& c, const std::string& v) { c.oracle.sites = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.oracle.sites); }},
      {"oracle", "spacing", [](RunConfig& c, const std::string& v) { c.oracle.spacing = to_double(v); },
       [](const RunConfig& c) { return num(c.oracle.spacing); }},
      {"oracle", "n_max", [](RunConfig& c, const std::string& v) { c.oracle.n_max = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.oracle.n_max); }},
      {"oracle", "atom_number", [](RunConfig& c, const std::string& v) { c.oracle.atom_number = to_double(v); },
       [](const RunConfig& c) { return num(c.oracle.atom_number); }},
      {"oracle", "rabi_over_detuning",
       [](RunConfig& c, const std::string& v) { c.oracle.rabi_over_detuning = to_double(v); },
       [](const RunConfig& c) { return num(c.oracle.rabi_over_detuning); }},
      {"oracle", "times", [](RunConfig& c, const std::string& v) { c.oracle.times = to_list(v); },
       [](const RunConfig& c) { return emit_list(c.oracle.times); }},
      {"oracle", "flip_theta_sign", [](RunConfig& c, const std::string& v) { c.oracle.flip_theta_sign = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.oracle.flip_theta_sign ? "true" : "false"); }},

      {"output", "path", [](RunConfig& c, const std::string& v) { c.output = v; },
       [](const RunConfig& c) { return c.output; }},
  };
  return table;
}

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : keys())
    if (section == k.section && name == k.name) return &k;
  return nullptr;
}

using LineMap = std::map<std::string, std::string>;  // "section.key" -> location

[[noreturn]] void fail(const std::string& key, const std::string& message, const LineMap* where) {
  std::string loc;
  if (where) {
    const auto it = where->find(key);
    if (it != where->end()) loc = it->second + ": ";
  }
  throw ConfigError(loc + key + ": " + message);
}

void validate_impl(const RunConfig& c, const LineMap* where) {
  auto require = [&](bool ok, const char* key, const std::string& message) {
    if (!ok) fail(key, message, where);
  };
  require(c.lambda0 > 0.0, "scales.lambda0", "must be > 0");
  require(c.gamma0 > 0.0, "scales.gamma0", "must be > 0");
  require(c.detuning != 0.0, "laser.detuning", "must be non-zero");
  require(c.rabi_over_detuning >= 0.0, "laser.rabi_over_detuning", "must be >= 0");
  require(c.amplitude > 0.0, "laser.amplitude", "must be > 0");
  require(!c.wavenumber || *c.wavenumber > 0.0, "laser.wavenumber", "must be > 0 or auto");
  if (!c.wavenumber) {
    const double dr = c.detuning_convention == DetuningConvention::Frequency ? 2.0 * std::numbers::pi * c.detuning
                                                                             : c.detuning;
    const double omega0 = 2.0 * std::numbers::pi * kSpeedOfLight / c.lambda0;
    require(omega0 + dr > 0.0, "laser.detuning", "puts the laser frequency below zero");
  }
  require(c.width.value > 0.0, "condensate.width", "must be > 0");
  require(c.atom_number >= 0.0, "condensate.atom_number", "must be >= 0");
  require(c.dipole.norm() > 0.0, "dipole.direction", "must be a non-zero vector");
  try {
    c.quadrature.validate();
  } catch (const std::invalid_argument& e) {
    fail("quadrature", e.what(), where);
  }
  require(c.u_max >= 0.0, "kernel.u_max", "must be >= 0");
  require(c.u_samples >= 1, "kernel.u_samples", "must be >= 1");
  require(c.theta_samples >= 1, "kernel.theta_samples", "must be >= 1");
  require(c.t_max >= 0.0, "decay.t_max", "must be >= 0");
  require(c.t_samples >= 1, "decay.t_samples", "must be >= 1");
  require(c.z_samples >= 1, "profile.z_samples", "must be >= 1");
  require(c.z_samples == 1 || c.z_max > c.z_min, "profile.z_max", "must exceed z_min");
  require(c.oracle.sites >= 1 && c.oracle.sites <= 4, "oracle.sites", "must be in 1..4");
  require(c.oracle.n_max >= 1 && c.oracle.n_max <= 14, "oracle.n_max", "must be in 1..14");
  require(c.oracle.spacing > 0.0, "oracle.spacing", "must be > 0");
  require(c.oracle.rabi_over_detuning >= 0.0, "oracle.rabi_over_detuning", "must be >= 0");
  require(c.oracle.atom_number >= 0.0, "oracle.atom_number", "must be >= 0");
  require(truncation_tail(c.oracle.atom_number, c.oracle.n_max) <= 1e-10, "oracle.atom_number",
          "too large for oracle.n_max (more than 1e-10 of the coherent state lies above the cutoff)");
  require(!c.oracle.times.empty(), "oracle.times", "needs at least one time");
  for (double t : c.oracle.times) require(t >= 0.0, "oracle.times", "must all be >= 0");
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  LineMap where;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string loc = source + ":" + std::to_string(line_no);
    std::string line = raw.substr(0, raw.find_first_of("#;"));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(loc + ": malformed section header '" + line + "'");
      section = lower(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& k : keys()) known = known || section == k.section;
      if (!known) throw ConfigError(loc + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(loc + ": expected 'key = value', got '" + line + "'");
    if (section.empty()) throw ConfigError(loc + ": key outside of any [section]");
    const std::string name = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const Key* key = find_key(section, name);
    if (!key) throw ConfigError(loc + ": unknown key '" + name + "' in [" + section + "]");
    try {
      key->set(c, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(loc + ": " + section + "." + name + ": " + e.what());
    }
    where[section + "." + name] = loc;
  }
  validate_impl(c, &where);
  return c;
}

RunConfig parse_config_string(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_config(in, source);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string lhs = lower(trim(assignment.substr(0, eq)));
  const auto dot = lhs.find('.');
  if (eq == std::string::npos || dot == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  const Key* key = find_key(lhs.substr(0, dot), lhs.substr(dot + 1));
  if (!key) throw ConfigError("override '" + assignment + "': unknown key '" + lhs + "'");
  RunConfig next = config;
  try {
    key->set(next, trim(assignment.substr(eq + 1)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("override '" + assignment + "': " + e.what());
  }
  LineMap where{{lhs, "override '" + assignment + "'"}};
  validate_impl(next, &where);
  config = std::move(next);
}

void validate(const RunConfig& config) { validate_impl(config, nullptr); }

std::string emit_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(config) + '\n';
  }
  return out;
}

namespace {

LaserField build_field(const RunConfig& c, double rabi0, double detuning, double kl) {
  const Complex b = std::polar(c.amplitude, c.amplitude_phase);
  if (c.geometry == Geometry::Running) return LaserField::running_wave(rabi0, detuning, kl, b);
  return LaserField(rabi0, detuning, {{0.5 * b, Vec3(0.0, 0.0, kl)}, {0.5 * b, Vec3(0.0, 0.0, -kl)}});
}

struct Units {
  double k0_per_m, omega0, detuning_rad_s, detuning, kl;
  PhysicalScales scales;
};

Units units(const RunConfig& c) {
  const double k0 = 2.0 * std::numbers::pi / c.lambda0;
  const double omega0 = kSpeedOfLight * k0;
  const double dr = c.detuning_convention == DetuningConvention::Frequency ? 2.0 * std::numbers::pi * c.detuning
                                                                           : c.detuning;
  const PhysicalScales scales(1.0, 1.0, omega0 / c.gamma0);
  const double delta = dr / c.gamma0;
  return {k0, omega0, dr, delta, laser_wavenumber(delta, scales, c.wavenumber), scales};
}

}  // namespace

ResolvedConfig resolve(const RunConfig& c) {
  validate(c);
  const Units u = units(c);
  auto len = [&](double v, bool meters) { return meters ? v * u.k0_per_m : v; };
  const double width = len(c.width.value, c.width.meters);
  const Vec3 center = c.center.meters ? Vec3(c.center.value * u.k0_per_m) : c.center.value;
  const Vec3 position = c.position.meters ? Vec3(c.position.value * u.k0_per_m) : c.position.value;
  LaserField field = build_field(c, c.rabi_over_detuning * u.detuning, u.detuning, u.kl);
  CondensateMode mode(width, std::sqrt(c.atom_number), center);
  Scenario scenario{u.scales, field, mode, DipoleOrientation(c.dipole), c.quadrature};
  const double gd = decoherence_rate(field, u.scales);
  const double nl = n_lambda(mode, u.scales);
  return {std::move(scenario), u.k0_per_m, u.omega0, u.detuning_rad_s, gd, nl, position};
}

LaserField oracle_geometry(const RunConfig& c) {
  validate(c);
  const Units u = units(c);
  return build_field(c, c.oracle.rabi_over_detuning * u.detuning, u.detuning, u.kl);
}

}  // namespace decolight
