#include "decolight/laser_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace decolight {

LaserField::LaserField(double rabi0, double detuning, std::vector<PlaneWaveComponent> components)
    : rabi0_(rabi0), detuning_(detuning), components_(std::move(components)) {
  if (detuning == 0.0 || !std::isfinite(detuning))
    throw std::invalid_argument("LaserField: detuning must be finite and non-zero");
  if (!std::isfinite(rabi0)) throw std::invalid_argument("LaserField: rabi0 must be finite");
  if (components_.empty()) throw std::invalid_argument("LaserField: needs at least one plane-wave component");
  for (const auto& c : components_) {
    if (!(c.wavevector.norm() > 0.0))
      throw std::invalid_argument("LaserField: plane-wave components need a non-zero wavevector");
  }
}

LaserField LaserField::running_wave(double rabi0, double detuning, double wavenumber, Complex amplitude) {
  return LaserField(rabi0, detuning, {{amplitude, Vec3(0.0, 0.0, wavenumber)}});
}

LaserField LaserField::standing_wave(double rabi0, double detuning, double wavenumber) {
  return LaserField(rabi0, detuning,
                    {{0.5, Vec3(0.0, 0.0, wavenumber)}, {0.5, Vec3(0.0, 0.0, -wavenumber)}});
}

bool LaserField::has_homogeneous_phase() const {
  constexpr double tol = 1e-12;
  // common phase of all non-zero amplitudes
  std::optional<Complex> phase;
  for (const auto& c : components_) {
    if (std::abs(c.amplitude) == 0.0) continue;
    const Complex p = c.amplitude / std::abs(c.amplitude);
    if (!phase) {
      phase = p;
    } else if (std::abs(p - *phase) > tol && std::abs(p + *phase) > tol) {
      return false;
    }
  }
  if (!phase) return true;
  // real parts relative to the common phase must pair up under k -> -k
  std::vector<bool> used(components_.size(), false);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (used[i]) continue;
    const Complex bi = components_[i].amplitude / *phase;
    if (std::abs(bi) == 0.0) {
      used[i] = true;
      continue;
    }
    bool matched = false;
    for (std::size_t j = i + 1; j < components_.size(); ++j) {
      if (used[j]) continue;
      const Complex bj = components_[j].amplitude / *phase;
      if ((components_[i].wavevector + components_[j].wavevector).norm() <=
              tol * components_[i].wavevector.norm() &&
          std::abs(bi - bj) <= tol * std::abs(bi)) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

bool LaserField::is_along_z() const {
  for (const auto& c : components_) {
    if (c.wavevector.x() != 0.0 || c.wavevector.y() != 0.0) return false;
  }
  return true;
}

std::optional<std::string> LaserField::adiabaticity_warning() const {
  const double ratio = std::abs(rabi0_ / detuning_);
  if (ratio <= 0.1) return std::nullopt;
  std::ostringstream os;
  os << "|rabi0/detuning| = " << ratio << " > 0.1; adiabatic elimination of the excited state is not reliable";
  return os.str();
}

Complex rabi_at(const LaserField& field, const Vec3& x) {
  Complex sum{0.0, 0.0};
  for (const auto& c : field.components()) sum += c.amplitude * std::polar(1.0, c.wavevector.dot(x));
  return field.rabi0() * sum;
}

double decoherence_rate(const LaserField& field, const PhysicalScales& scales) {
  const double ratio = field.rabi0() / field.detuning();
  return 0.5 * scales.gamma0() * ratio * ratio;
}

double phase_asymmetry(const LaserField& field, const Vec3& x, const Vec3& x_prime) {
  return (rabi_at(field, x_prime) * std::conj(rabi_at(field, x))).imag();
}

double laser_wavenumber(double detuning, const PhysicalScales& scales,
                        std::optional<double> override_wavenumber) {
  if (override_wavenumber) {
    if (!(*override_wavenumber > 0.0)) throw std::invalid_argument("laser wavenumber override must be > 0");
    return *override_wavenumber;
  }
  if (detuning == 0.0) return scales.k0();
  if (!(scales.omega0() > 0.0))
    throw std::invalid_argument("laser_wavenumber: omega0 is unknown; set it or give an explicit wavenumber");
  return scales.k0() * (1.0 + detuning / scales.omega0());
}

double laser_wavenumber(const LaserField& field, const PhysicalScales& scales,
                        std::optional<double> override_wavenumber) {
  return laser_wavenumber(field.detuning(), scales, override_wavenumber);
}

}  // namespace decolight
