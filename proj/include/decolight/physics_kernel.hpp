#pragma once

#include <numbers>

#include <Eigen/Core>

namespace decolight {

using Vec3 = Eigen::Vector3d;

/// Resonance scales of the atomic transition.
///
/// Everything downstream depends on positions only through k0*r and on
/// time only through rates measured in the same unit as gamma0, so a
/// caller is free to pick units (the CLI uses k0 = gamma0 = 1).
class PhysicalScales {
 public:
  /// omega0 is the resonance angular frequency in the time unit of gamma0.
  /// It is only needed to derive the laser wavenumber from a detuning and
  /// may be left at 0 when that derivation is not used.
  PhysicalScales(double k0, double gamma0, double omega0 = 0.0);

  double k0() const { return k0_; }
  double gamma0() const { return gamma0_; }
  double omega0() const { return omega0_; }
  double lambda0() const { return 2.0 * std::numbers::pi / k0_; }

  bool operator==(const PhysicalScales&) const = default;

 private:
  double k0_;
  double gamma0_;
  double omega0_;
};

/// Unit vector along the atomic dipole moment.
class DipoleOrientation {
 public:
  /// Normalizes `direction`; throws std::invalid_argument for a zero or
  /// non-finite vector.
  explicit DipoleOrientation(const Vec3& direction);

  /// x-hat: perpendicular to a laser running along z.
  static DipoleOrientation transverse() { return DipoleOrientation(Vec3::UnitX()); }

  const Vec3& direction() const { return d_; }

 private:
  Vec3 d_;
};

// Spherical Bessel functions of the first kind for u >= 0. Small arguments
// go through the power series so that u = 0 and the 1/u factors are exact.
double sph_bessel_j0(double u);
double sph_bessel_j1(double u);
/// j1(u)/u, with the finite limit 1/3 at u = 0.
double sph_bessel_j1_over_u(double u);
double sph_bessel_j2(double u);

/// Split of the dipole kernel into J = isotropic + anisotropic * cos^2(theta).
/// Using j0 + j2 = 3 j1/u this is (j0 - j1/u) + j2 cos^2(theta); the
/// quadrature routines average over cos^2 analytically.
struct KernelRadialParts {
  double isotropic;
  double anisotropic;
};
KernelRadialParts kernel_radial_parts(double u);

/// Dipole radiation kernel
///   J = sin^2(theta) j0(u) + (j1(u)/u) (3 cos^2(theta) - 1),  u = k0 |r|,
/// with theta the angle between the dipole and r. At r = 0 it returns the
/// direction-independent limit 2/3.
double dipole_kernel(const Vec3& separation, const DipoleOrientation& dipole,
                     const PhysicalScales& scales);

}  // namespace decolight
