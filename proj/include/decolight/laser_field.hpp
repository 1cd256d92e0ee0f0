#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "decolight/physics_kernel.hpp"

namespace decolight {

using Complex = std::complex<double>;

struct PlaneWaveComponent {
  Complex amplitude{1.0, 0.0};  // dimensionless factor b
  Vec3 wavevector = Vec3::Zero();
};

/// Complex Rabi-frequency field Omega(x) = rabi0 * sum_j b_j exp(i k_j . x)
/// together with the detuning from resonance.
class LaserField {
 public:
  /// Throws std::invalid_argument for detuning == 0, an empty component
  /// list or a component with a zero wavevector.
  LaserField(double rabi0, double detuning, std::vector<PlaneWaveComponent> components);

  /// Single plane wave b * exp(i k z).
  static LaserField running_wave(double rabi0, double detuning, double wavenumber,
                                 Complex amplitude = 1.0);
  /// Two counter-propagating waves with b = 1/2 each, so Omega = rabi0 cos(k z).
  static LaserField standing_wave(double rabi0, double detuning, double wavenumber);

  double rabi0() const { return rabi0_; }
  double detuning() const { return detuning_; }
  const std::vector<PlaneWaveComponent>& components() const { return components_; }

  /// True when Omega(x) = e^{i phi} * (real function), i.e. all b_j share a
  /// global phase and the (k_j, |b_j|) set is symmetric under k -> -k.
  /// Such fields give Im[Omega(x')Omega*(x)] = 0 identically.
  bool has_homogeneous_phase() const;

  /// True when every wavevector points along z.
  bool is_along_z() const;

  /// Warning text when |rabi0/detuning| > 0.1, where adiabatic elimination
  /// of the excited state becomes questionable.
  std::optional<std::string> adiabaticity_warning() const;

 private:
  double rabi0_;
  double detuning_;
  std::vector<PlaneWaveComponent> components_;
};

Complex rabi_at(const LaserField& field, const Vec3& x);

/// gamma_D = gamma0 |rabi0|^2 / (2 detuning^2).
double decoherence_rate(const LaserField& field, const PhysicalScales& scales);

/// Im[Omega(x') Omega*(x)], i.e. (Omega(x')Omega*(x) - Omega*(x')Omega(x)) / 2i.
double phase_asymmetry(const LaserField& field, const Vec3& x, const Vec3& x_prime);

/// Laser wavenumber for a detuning: k_L = k0 (1 + detuning/omega0).
/// Requires scales.omega0() > 0 unless `override_wavenumber` is given.
double laser_wavenumber(double detuning, const PhysicalScales& scales,
                        std::optional<double> override_wavenumber = std::nullopt);
double laser_wavenumber(const LaserField& field, const PhysicalScales& scales,
                        std::optional<double> override_wavenumber = std::nullopt);

}  // namespace decolight
