#include "decolight/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "decolight/csv.hpp"
#include "decolight/error.hpp"

namespace decolight {

namespace {

double grid(double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }

std::string describe(const RunConfig& config, const char* command) {
  std::ostringstream os;
  os << "decolight " << command << "\n";
  os << "resolved configuration:\n" << emit_config(config);
  return os.str();
}

std::string describe_units(const ResolvedConfig& r) {
  const auto& s = r.scenario;
  std::ostringstream os;
  os << "derived quantities (lengths in 1/k0, rates in gamma0):\n";
  os << "k0 = " << format_number(r.k0_per_m) << " 1/m\n";
  os << "omega0 = " << format_number(r.omega0_per_s) << " rad/s\n";
  os << "detuning = " << format_number(r.detuning_rad_s) << " rad/s = " << format_number(s.field.detuning())
     << " gamma0\n";
  os << "rabi0 = " << format_number(s.field.rabi0()) << " gamma0\n";
  os << "k_L = " << format_number(laser_wavenumber(s.field, s.scales)) << " k0\n";
  os << "width = " << format_number(s.mode.width) << " 1/k0\n";
  os << "gamma_D = " << format_number(r.gamma_d) << " gamma0\n";
  os << "N_lambda = " << format_number(r.n_lambda);
  return os.str();
}

void warn_adiabatic(const ResolvedConfig& r, std::ostream& log) {
  if (const auto w = r.scenario.field.adiabaticity_warning()) log << "warning: " << *w << '\n';
}

}  // namespace

void cmd_kernel(const RunConfig& config, std::ostream& csv) {
  validate(config);
  CsvWriter out(csv);
  out.comment(describe(config, "kernel"));
  out.comment("theta is measured from the dipole axis");
  out.header({"u[k0*r]", "theta[rad]", "J"});
  const PhysicalScales unit(1.0, 1.0);
  const DipoleOrientation axis(Vec3::UnitZ());
  for (int i = 0; i < config.u_samples; ++i) {
    const double u = grid(0.0, config.u_max, config.u_samples, i);
    for (int j = 0; j < config.theta_samples; ++j) {
      const double th = grid(0.0, 0.5 * std::numbers::pi, config.theta_samples, j);
      const Vec3 sep = u * Vec3(std::sin(th), 0.0, std::cos(th));
      out.row({u, th, dipole_kernel(sep, axis, unit)});
    }
  }
}

void cmd_decay(const RunConfig& config, std::ostream& csv, std::ostream& log) {
  const ResolvedConfig r = resolve(config);
  warn_adiabatic(r, log);
  const double to_gamma0 = config.time_unit == TimeUnit::GammaD ? 1.0 / r.gamma_d : 1.0;
  if (config.time_unit == TimeUnit::GammaD && !(r.gamma_d > 0.0))
    throw ConfigError("decay.time_unit: gamma_d needs a non-zero Rabi frequency");
  std::vector<double> times;
  for (int i = 0; i < config.t_samples; ++i) times.push_back(grid(0.0, config.t_max, config.t_samples, i) * to_gamma0);
  const auto series = decay_time_series(r.position, times, r.scenario);

  CsvWriter out(csv);
  out.comment(describe(config, "decay"));
  out.comment(describe_units(r));
  out.comment("position = " + format_number(r.position.x()) + " " + format_number(r.position.y()) + " " +
              format_number(r.position.z()) + " 1/k0");
  const char* tcol = config.time_unit == TimeUnit::GammaD ? "t[1/gamma_D]" : "t[1/gamma0]";
  out.header({tcol, "gamma_D*t", "spf", "re_S", "im_S", "abs_amplitude[k0^1.5]", "arg_amplitude[rad]",
              "re_S_minus_1"});
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& d = series[i];
    out.row({times[i] / to_gamma0, r.gamma_d * d.time, d.single_particle_factor, d.overlap.real(), d.overlap.imag(),
             std::abs(d.amplitude), std::arg(d.amplitude), d.overlap_deficit.real()});
  }
}

void cmd_profile(const RunConfig& config, std::ostream& csv, std::ostream& log) {
  const ResolvedConfig r = resolve(config);
  warn_adiabatic(r, log);
  const bool trivial = r.scenario.field.has_homogeneous_phase() || r.scenario.field.rabi0() == 0.0;
  CsvWriter out(csv);
  out.comment(describe(config, "profile"));
  out.comment(describe_units(r));
  if (trivial) {
    const char* msg = "warning: the laser phase is spatially homogeneous, A and B vanish identically";
    log << msg << '\n';
    out.comment(msg);
  }
  out.header({"z[w]", "z[1/k0]", "A", "B"});
  const double w = r.scenario.mode.width;
  const double zc = r.scenario.mode.center.z();
  for (int i = 0; i < config.z_samples; ++i) {
    const double zw = grid(config.z_min, config.z_max, config.z_samples, i);
    const ABProfilePoint p = ab_profile(zc + zw * w, r.scenario, true);
    out.row({zw, zc + zw * w, p.A, p.B});
  }
}

bool cmd_oracle(const RunConfig& config, std::ostream& report) {
  validate(config);
  const ResolvedConfig r = resolve(config);
  const auto checks = run_oracle_suite(config.oracle, oracle_geometry(config), r.scenario.dipole, r.scenario.scales);
  bool all = true;
  char line[256];
  std::snprintf(line, sizeof line, "%-56s %-13s %-13s %s\n", "check", "deviation", "threshold", "result");
  report << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-56s %-13.6e %-13.6e %s\n", c.name.c_str(), c.deviation, c.threshold,
                  c.passed ? "PASS" : "FAIL");
    report << line;
    all = all && c.passed;
  }
  report << (all ? "all checks passed\n" : "oracle FAILED\n");
  return all;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    if (command == "kernel") {
      cmd_kernel(config, out);
    } else if (command == "decay") {
      cmd_decay(config, out, log);
    } else if (command == "profile") {
      cmd_profile(config, out, log);
    } else if (command == "oracle") {
      if (!cmd_oracle(config, out)) return kExitOracle;
    } else {
      log << "error: unknown command '" << command << "'\n";
      return kExitConfig;
    }
  } catch (const ConvergenceError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace decolight
