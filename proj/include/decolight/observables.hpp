#pragma once

#include <complex>
#include <vector>

#include "decolight/condensate.hpp"
#include "decolight/laser_field.hpp"
#include "decolight/physics_kernel.hpp"
#include "decolight/quadrature.hpp"

namespace decolight {

/// Everything needed to evaluate the condensate observables.
struct Scenario {
  PhysicalScales scales;
  LaserField field;
  CondensateMode mode;
  DipoleOrientation dipole = DipoleOrientation::transverse();
  QuadratureSpec quadrature{};
};

struct DecoherenceResult {
  Vec3 position = Vec3::Zero();
  double time = 0.0;
  double single_particle_factor = 1.0;
  Complex overlap{1.0, 0.0};
  /// overlap - 1, kept separately because it is far below double epsilon
  /// relative to 1 at short times.
  Complex overlap_deficit{0.0, 0.0};
  Complex amplitude{0.0, 0.0};
  double quadrature_error = 0.0;
};

struct ABProfilePoint {
  double z = 0.0;
  double A = 0.0;
  double B = 0.0;
};

/// -(3/2) gamma0 / detuning^2: Theta = prefactor * t * J * Im[Omega(x')Omega*(x)].
double theta_rate_prefactor(const PhysicalScales& scales, double detuning);

/// exp(-(gamma0 t / 2) |Omega|^2 / detuning^2). Throws for t < 0.
double single_particle_factor(Complex rabi, double detuning, double t, const PhysicalScales& scales);
double single_particle_factor(const LaserField& field, const Vec3& x, double t, const PhysicalScales& scales);

/// Angle of the phase factor phi~0(x', t) / phi0(x'):
///   Theta = -(3/2) gamma0 t J Im[Omega(x') Omega*(x)] / detuning^2.
/// The value-level overload is shared with the lattice oracle.
double phase_angle(Complex rabi_x, Complex rabi_x_prime, double kernel, double t, double detuning,
                   const PhysicalScales& scales);
double phase_angle(const Vec3& x, const Vec3& x_prime, double t, const LaserField& field,
                   const PhysicalScales& scales, const DipoleOrientation& dipole);

/// phi0(x') exp(i Theta(x, x', t)).
Complex mode_tilde(const Vec3& x, const Vec3& x_prime, double t, const Scenario& scenario);

/// exp(i theta) - 1 without cancellation for small theta.
Complex expm1_i(double theta);

/// J0(x) - 1 (cylindrical Bessel) without cancellation for small x.
double bessel_j0_minus_one(double x);

struct OverlapResult {
  Complex value{1.0, 0.0};
  Complex deficit{0.0, 0.0};  // value - 1
  double error_estimate = 0.0;
  bool reduced = false;  // axisymmetric reduction used
};

/// True when the overlap integral at x can use the 2D reduction: all laser
/// wavevectors along z, x - center along z, dipole parallel or
/// perpendicular to z.
bool overlap_is_axisymmetric(const Vec3& x, const Scenario& scenario);

/// S(t) = int |phi0(x')|^2 exp(i Theta(x, x', t)) d^3x'.
OverlapResult overlap(const Vec3& x, double t, const Scenario& scenario);

/// <alpha| R(t) |alpha> = alpha phi0(x) spf exp(|alpha|^2 (S - 1)).
DecoherenceResult condensate_amplitude(const Vec3& x, double t, const Scenario& scenario);

/// Evaluates condensate_amplitude on a sorted, non-negative time grid.
std::vector<DecoherenceResult> decay_time_series(const Vec3& x, const std::vector<double>& times,
                                                 const Scenario& scenario);

enum class MomentRoute {
  Auto,          // SemiAnalytic when axisymmetric, else Full3D
  SemiAnalytic,  // azimuth and mu in closed form, radial quadrature
  Reduced2D,     // azimuth in closed form, (r, mu) quadrature
  Full3D,        // integrate_gaussian_weighted on Theta directly
};

/// |phi0|^2-weighted moments of the phase rate Theta/t.
struct PhaseMoments {
  double first = 0.0;   // <Theta/t>
  double second = 0.0;  // <(Theta/t)^2>
  double error_estimate = 0.0;
};

PhaseMoments phase_moments(const Vec3& x, const Scenario& scenario, MomentRoute route = MomentRoute::Auto);

/// Short-time profile functions on the z line through the condensate centre,
/// x = (c_x, c_y, z), defined by matching
///   |alpha|^2 (i M1 t - M2 t^2 / 2) = -3 i gamma_D t N_lambda A - (3 gamma_D t)^2 N_lambda B,
/// i.e. A = -(|alpha|^2/N_lambda) M1 / (3 gamma_D), B = (|alpha|^2/N_lambda) M2 / (18 gamma_D^2).
/// A field with homogeneous phase throws std::invalid_argument unless
/// `allow_homogeneous_phase`, in which case exact zeros are returned.
ABProfilePoint ab_profile(double z, const Scenario& scenario, bool allow_homogeneous_phase = false,
                          MomentRoute route = MomentRoute::Auto);

}  // namespace decolight
