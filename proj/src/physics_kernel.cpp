#include "decolight/physics_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace decolight {

namespace {

// Below this the closed forms cancel catastrophically (j2 loses ~3 digits
// already at u = 0.5), above it they are accurate to a few ulp.
constexpr double kSeriesBranch = 2.0;

// j_n(u) / u^n = sum_k (-u^2/2)^k / (k! (2n+2k+1)!!)
double reduced_series(int n, double u) {
  double dfact = 1.0;  // (2n+1)!!
  for (int m = 3; m <= 2 * n + 1; m += 2) dfact *= m;
  const double x = -0.5 * u * u;
  double term = 1.0 / dfact;
  double sum = term;
  for (int k = 1; k < 20; ++k) {
    term *= x / (k * (2.0 * n + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

PhysicalScales::PhysicalScales(double k0, double gamma0, double omega0)
    : k0_(k0), gamma0_(gamma0), omega0_(omega0) {
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw std::invalid_argument("PhysicalScales: k0 must be > 0");
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
    throw std::invalid_argument("PhysicalScales: gamma0 must be > 0");
  if (!(omega0 >= 0.0) || !std::isfinite(omega0))
    throw std::invalid_argument("PhysicalScales: omega0 must be >= 0");
}

DipoleOrientation::DipoleOrientation(const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::invalid_argument("DipoleOrientation: direction must be a finite non-zero vector");
  d_ = direction / n;
}

double sph_bessel_j0(double u) {
  if (u < kSeriesBranch) return reduced_series(0, u);
  return std::sin(u) / u;
}

double sph_bessel_j1_over_u(double u) {
  if (u < kSeriesBranch) return reduced_series(1, u);
  return (std::sin(u) / u - std::cos(u)) / (u * u);
}

double sph_bessel_j1(double u) {
  if (u < kSeriesBranch) return u * reduced_series(1, u);
  return std::sin(u) / (u * u) - std::cos(u) / u;
}

double sph_bessel_j2(double u) {
  if (u < kSeriesBranch) return u * u * reduced_series(2, u);
  const double s = std::sin(u), c = std::cos(u);
  return (3.0 / (u * u) - 1.0) * s / u - 3.0 * c / (u * u);
}

KernelRadialParts kernel_radial_parts(double u) {
  return {sph_bessel_j0(u) - sph_bessel_j1_over_u(u), sph_bessel_j2(u)};
}

double dipole_kernel(const Vec3& separation, const DipoleOrientation& dipole,
                     const PhysicalScales& scales) {
  const double r = separation.norm();
  if (r == 0.0) return 2.0 / 3.0;
  const double u = scales.k0() * r;
  const double cos_theta = dipole.direction().dot(separation) / r;
  const double cos2 = cos_theta * cos_theta;
  const double sin2 = 1.0 - cos2;
  return sin2 * sph_bessel_j0(u) + sph_bessel_j1_over_u(u) * (3.0 * cos2 - 1.0);
}

}  // namespace decolight
