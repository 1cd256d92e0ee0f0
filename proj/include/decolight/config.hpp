#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decolight/fock_oracle.hpp"
#include "decolight/observables.hpp"

namespace decolight {

/// A length given either in units of 1/k0 or in meters ("... m").
struct Length {
  double value = 0.0;
  bool meters = false;
  bool operator==(const Length&) const = default;
};

struct LengthVec {
  Vec3 value = Vec3::Zero();
  bool meters = false;
  bool operator==(const LengthVec& o) const { return meters == o.meters && value == o.value; }
};

enum class Geometry { Running, Standing };
enum class DetuningConvention { Frequency, Angular };
enum class TimeUnit { GammaD, Gamma0 };

/// Everything a subcommand reads. Lengths are kept as written so the
/// resolved config re-emits in the same units.
struct RunConfig {
  // [scales]
  double lambda0 = 780e-9;  // m
  double gamma0 = 3.81e7;   // 1/s

  // [laser]
  Geometry geometry = Geometry::Running;
  double detuning = 1e9;  // Hz or rad/s, see detuning_convention
  DetuningConvention detuning_convention = DetuningConvention::Frequency;
  double rabi_over_detuning = 0.02;
  double amplitude = 1.0;        // |b|
  double amplitude_phase = 0.0;  // arg b, rad
  std::optional<double> wavenumber;  // k_L / k0; derived from the detuning when absent

  // [condensate]
  Length width{100.0, false};
  double atom_number = 1e6;
  LengthVec center{};

  // [dipole]
  Vec3 dipole = Vec3::UnitX();

  // [quadrature]
  QuadratureSpec quadrature{};

  // [kernel]
  double u_max = 20.0;
  int u_samples = 201;
  int theta_samples = 7;

  // [decay]
  LengthVec position{Vec3(0.0, 0.0, 100.0), false};
  double t_max = 2.0;
  int t_samples = 11;
  TimeUnit time_unit = TimeUnit::GammaD;

  // [profile], z in units of the width
  double z_min = -3.0;
  double z_max = 3.0;
  int z_samples = 25;

  // [oracle]
  OracleSettings oracle{};

  // [output]
  std::string output;  // empty: standard output

  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines under `[section]` headers. Section, key and
/// enumerated values are case-insensitive; `#` and `;` start comments.
/// `source` names the input in error messages. Throws ConfigError.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig parse_config_string(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies `section.key=value` on top of `config`, then re-validates.
void apply_override(RunConfig& config, const std::string& assignment);

/// Cross-field checks; throws ConfigError naming the offending key.
void validate(const RunConfig& config);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Physical quantities in internal units (k0 = gamma0 = 1).
struct ResolvedConfig {
  Scenario scenario;
  double k0_per_m;       // 2 pi / lambda0
  double omega0_per_s;   // 2 pi c / lambda0
  double detuning_rad_s; // angular detuning
  double gamma_d;        // in units of gamma0
  double n_lambda;
  Vec3 position;         // decay observation point, units of 1/k0
};

ResolvedConfig resolve(const RunConfig& config);

/// Laser field handed to the oracle suite (its rabi0 is replaced there).
LaserField oracle_geometry(const RunConfig& config);

}  // namespace decolight
