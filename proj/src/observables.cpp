#include "decolight/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace decolight {

namespace {

constexpr double kPi = std::numbers::pi;

void require_non_negative_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("time must be finite and >= 0 (the master equation runs forward in time)");
}

// Im[Omega(x + zeta z-hat) Omega*(x)] for a field whose wavevectors all lie
// along z, as a sum of complex exponentials sum_q c_q exp(i kappa_q zeta).
struct AxialPhaseProfile {
  struct Term {
    Complex coefficient;
    double kappa;
  };
  std::vector<Term> terms;  // each plane wave contributes a conjugate pair
  double max_kappa = 0.0;

  AxialPhaseProfile(const LaserField& field, const Vec3& x) {
    const Complex omega_x_conj = std::conj(rabi_at(field, x));
    auto add = [this](Complex coefficient, double kappa) {
      for (auto& t : terms)
        if (t.kappa == kappa) {
          t.coefficient += coefficient;
          return;
        }
      terms.push_back({coefficient, kappa});
    };
    for (const auto& c : field.components()) {
      const Complex g = field.rabi0() * c.amplitude * std::polar(1.0, c.wavevector.dot(x)) * omega_x_conj;
      const double k = c.wavevector.z();
      // Im(g e^{ik zeta}) = (g e^{ik zeta} - conj(g) e^{-ik zeta}) / 2i
      add(g / Complex(0.0, 2.0), k);
      add(-std::conj(g) / Complex(0.0, 2.0), -k);
    }
    // counter-propagating pairs of a standing wave cancel exactly
    std::erase_if(terms, [](const Term& t) { return t.coefficient == Complex(0.0, 0.0); });
    for (const auto& t : terms) max_kappa = std::max(max_kappa, std::abs(t.kappa));
  }

  bool vanishes() const { return terms.empty(); }

  double operator()(double zeta) const {
    Complex s{0.0, 0.0};
    for (const auto& t : terms) s += t.coefficient * std::polar(1.0, t.kappa * zeta);
    return s.real();
  }
};

bool along_z(const Vec3& v, double scale) {
  return std::hypot(v.x(), v.y()) <= 1e-12 * std::max(scale, v.norm());
}

// Dipole projection onto z: p = d_z, q^2 = 1 - p^2.
struct DipoleAxis {
  double p2, q2;
  explicit DipoleAxis(const DipoleOrientation& d) {
    p2 = d.direction().z() * d.direction().z();
    q2 = std::max(0.0, 1.0 - p2);
  }
  bool parallel() const { return q2 <= 1e-24; }
  bool perpendicular() const { return p2 <= 1e-24; }
};

bool moments_are_axisymmetric(const Vec3& x, const Scenario& s) {
  return s.field.is_along_z() && along_z(x - s.mode.center, s.mode.width);
}

// Returns exp(-shift) * int_{-1}^{1} mu^n exp(gamma mu) dmu for n = 0..4.
std::array<Complex, 5> exponential_moments(Complex gamma, double shift) {
  std::array<Complex, 5> e{};
  if (std::abs(gamma) <= 4.0) {
    // power series: sum_k gamma^k/k! * int mu^{n+k}, only even n+k survive
    for (int n = 0; n < 5; ++n) {
      Complex term{1.0, 0.0};
      Complex sum{0.0, 0.0};
      for (int k = 0; k < 80; ++k) {
        if (k > 0) term *= gamma / static_cast<double>(k);
        if ((n + k) % 2 == 0) sum += term * (2.0 / (n + k + 1));
        if (k > 8 && std::abs(term) < 1e-18) break;
      }
      e[n] = sum * std::exp(-shift);
    }
    return e;
  }
  // upward recurrence, stable while n < |gamma|
  const Complex ep = std::exp(gamma - shift);
  const Complex em = std::exp(-gamma - shift);
  e[0] = (ep - em) / gamma;
  for (int n = 1; n < 5; ++n) {
    const Complex boundary = (n % 2 == 0) ? ep - em : ep + em;
    e[n] = (boundary - static_cast<double>(n) * e[n - 1]) / gamma;
  }
  return e;
}

PhaseMoments moments_semi_analytic(const Vec3& x, const Scenario& s) {
  const AxialPhaseProfile profile(s.field, x);
  const DipoleAxis dip(s.dipole);
  const double w = s.mode.width, w2 = w * w;
  const double offset = (x - s.mode.center).z();
  const double pref = theta_rate_prefactor(s.scales, s.field.detuning());
  const double k0 = s.scales.k0();
  const double radial_norm = 2.0 / (std::sqrt(kPi) * w * w2);

  // <cos^2> and <cos^4> over the azimuth, as polynomials in mu (even powers)
  const double c2_0 = 0.5 * dip.q2, c2_2 = dip.p2 - 0.5 * dip.q2;
  const double c4_0 = 0.375 * dip.q2 * dip.q2;
  const double c4_2 = 3.0 * dip.p2 * dip.q2 - 0.75 * dip.q2 * dip.q2;
  const double c4_4 = dip.p2 * dip.p2 - 3.0 * dip.p2 * dip.q2 + 0.375 * dip.q2 * dip.q2;

  auto integrand = [&](double r) {
    const KernelRadialParts kp = kernel_radial_parts(k0 * r);
    const double a = kp.isotropic, b = kp.anisotropic;
    const double shift = (r * r + offset * offset) / w2;
    const double beta = -2.0 * r * offset / w2;
    Complex first{0.0, 0.0}, second{0.0, 0.0};
    for (const auto& t : profile.terms) {
      const auto e = exponential_moments(Complex(beta, t.kappa * r), shift);
      first += t.coefficient * ((a + b * c2_0) * e[0] + b * c2_2 * e[2]);
    }
    for (const auto& t1 : profile.terms) {
      for (const auto& t2 : profile.terms) {
        const auto e = exponential_moments(Complex(beta, (t1.kappa + t2.kappa) * r), shift);
        const double p0 = a * a + 2.0 * a * b * c2_0 + b * b * c4_0;
        const double p2 = 2.0 * a * b * c2_2 + b * b * c4_2;
        const double p4 = b * b * c4_4;
        second += t1.coefficient * t2.coefficient * (p0 * e[0] + p2 * e[2] + p4 * e[4]);
      }
    }
    // pack both real moments into one complex integrand
    return radial_norm * r * r * Complex(pref * first.real(), pref * pref * second.real());
  };
  const double kmax = 2.0 * (k0 + profile.max_kappa);
  const QuadratureResult q = integrate_radial(integrand, offset, w, kmax, s.quadrature);
  return {q.value.real(), q.value.imag(), q.error_estimate};
}

PhaseMoments moments_reduced(const Vec3& x, const Scenario& s) {
  const AxialPhaseProfile profile(s.field, x);
  const DipoleAxis dip(s.dipole);
  const double offset = (x - s.mode.center).z();
  const double pref = theta_rate_prefactor(s.scales, s.field.detuning());
  const double k0 = s.scales.k0();
  auto row = [&](double r) -> AxisymmetricRow {
    const KernelRadialParts kp = kernel_radial_parts(k0 * r);
    return [&profile, &dip, pref, kp, r](double mu) {
      const double s2 = 1.0 - mu * mu;
      const double c2 = dip.p2 * mu * mu + 0.5 * dip.q2 * s2;
      const double c4 = dip.p2 * dip.p2 * mu * mu * mu * mu + 3.0 * dip.p2 * dip.q2 * mu * mu * s2 +
                        0.375 * dip.q2 * dip.q2 * s2 * s2;
      const double a = kp.isotropic, b = kp.anisotropic;
      const double P = profile(r * mu);
      const double jbar = a + b * c2;
      const double j2bar = a * a + 2.0 * a * b * c2 + b * b * c4;
      return Complex(pref * jbar * P, pref * pref * j2bar * P * P);
    };
  };
  const double kmax = 2.0 * (k0 + profile.max_kappa);
  const QuadratureResult q = integrate_axisymmetric(row, offset, s.mode.width, kmax, s.quadrature);
  return {q.value.real(), q.value.imag(), q.error_estimate};
}

PhaseMoments moments_full(const Vec3& x, const Scenario& s) {
  auto f = [&](const Vec3& xp) {
    const double rate = phase_angle(x, xp, 1.0, s.field, s.scales, s.dipole);
    return Complex(rate, rate * rate);
  };
  const QuadratureResult q = integrate_gaussian_weighted(f, s.mode, s.quadrature);
  return {q.value.real(), q.value.imag(), q.error_estimate};
}

OverlapResult overlap_reduced(const Vec3& x, double t, const Scenario& s) {
  const AxialPhaseProfile profile(s.field, x);
  if (profile.vanishes()) return {.reduced = true};
  const DipoleAxis dip(s.dipole);
  const bool parallel = dip.parallel();
  const double offset = (x - s.mode.center).z();
  const double pref_t = theta_rate_prefactor(s.scales, s.field.detuning()) * t;
  const double k0 = s.scales.k0();
  auto row = [&](double r) -> AxisymmetricRow {
    const KernelRadialParts kp = kernel_radial_parts(k0 * r);
    return [&profile, parallel, pref_t, kp, r](double mu) {
      const double P = profile(r * mu);
      if (parallel) return expm1_i(pref_t * (kp.isotropic + kp.anisotropic * mu * mu) * P);
      // Theta = Theta0 + beta cos(2 phi); the azimuthal mean of e^{i beta cos 2phi} is J0(beta)
      const double half_s2 = 0.5 * (1.0 - mu * mu);
      const double theta0 = pref_t * (kp.isotropic + kp.anisotropic * half_s2) * P;
      const double beta = pref_t * kp.anisotropic * half_s2 * P;
      const double j0m1 = bessel_j0_minus_one(beta);
      return expm1_i(theta0) * (1.0 + j0m1) + j0m1;
    };
  };
  const double kmax = 2.0 * (k0 + profile.max_kappa);
  const QuadratureResult q = integrate_axisymmetric(row, offset, s.mode.width, kmax, s.quadrature);
  OverlapResult out;
  out.deficit = q.value;
  out.value = 1.0 + q.value;
  out.error_estimate = q.error_estimate;
  out.reduced = true;
  return out;
}

}  // namespace

double theta_rate_prefactor(const PhysicalScales& scales, double detuning) {
  return -1.5 * scales.gamma0() / (detuning * detuning);
}

double single_particle_factor(Complex rabi, double detuning, double t, const PhysicalScales& scales) {
  require_non_negative_time(t);
  return std::exp(-0.5 * scales.gamma0() * t * std::norm(rabi) / (detuning * detuning));
}

double single_particle_factor(const LaserField& field, const Vec3& x, double t, const PhysicalScales& scales) {
  return single_particle_factor(rabi_at(field, x), field.detuning(), t, scales);
}

double phase_angle(Complex rabi_x, Complex rabi_x_prime, double kernel, double t, double detuning,
                   const PhysicalScales& scales) {
  require_non_negative_time(t);
  const double asym = (rabi_x_prime * std::conj(rabi_x)).imag();
  return theta_rate_prefactor(scales, detuning) * t * kernel * asym;
}

double phase_angle(const Vec3& x, const Vec3& x_prime, double t, const LaserField& field,
                   const PhysicalScales& scales, const DipoleOrientation& dipole) {
  return phase_angle(rabi_at(field, x), rabi_at(field, x_prime), dipole_kernel(x - x_prime, dipole, scales), t,
                     field.detuning(), scales);
}

Complex mode_tilde(const Vec3& x, const Vec3& x_prime, double t, const Scenario& s) {
  const double theta = phase_angle(x, x_prime, t, s.field, s.scales, s.dipole);
  return mode_at(s.mode, x_prime) * std::polar(1.0, theta);
}

Complex expm1_i(double theta) {
  const double h = std::sin(0.5 * theta);
  return {-2.0 * h * h, std::sin(theta)};
}

double bessel_j0_minus_one(double x) {
  if (std::abs(x) < 8.0) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::cyl_bessel_j(0.0, std::abs(x)) - 1.0;
}

bool overlap_is_axisymmetric(const Vec3& x, const Scenario& s) {
  const DipoleAxis dip(s.dipole);
  return moments_are_axisymmetric(x, s) && (dip.parallel() || dip.perpendicular());
}

OverlapResult overlap(const Vec3& x, double t, const Scenario& s) {
  require_non_negative_time(t);
  if (t == 0.0 || s.field.rabi0() == 0.0) return {};
  if (s.quadrature.reduce_axisymmetric && overlap_is_axisymmetric(x, s)) return overlap_reduced(x, t, s);
  auto f = [&](const Vec3& xp) { return expm1_i(phase_angle(x, xp, t, s.field, s.scales, s.dipole)); };
  const QuadratureResult q = integrate_gaussian_weighted(f, s.mode, s.quadrature);
  OverlapResult out;
  out.deficit = q.value;
  out.value = 1.0 + q.value;
  out.error_estimate = q.error_estimate;
  return out;
}

DecoherenceResult condensate_amplitude(const Vec3& x, double t, const Scenario& s) {
  require_non_negative_time(t);
  const OverlapResult ov = overlap(x, t, s);
  DecoherenceResult r;
  r.position = x;
  r.time = t;
  r.single_particle_factor = single_particle_factor(s.field, x, t, s.scales);
  r.overlap = ov.value;
  r.overlap_deficit = ov.deficit;
  r.quadrature_error = ov.error_estimate;
  r.amplitude = s.mode.alpha * mode_at(s.mode, x) * r.single_particle_factor *
                std::exp(s.mode.atom_number() * ov.deficit);
  return r;
}

std::vector<DecoherenceResult> decay_time_series(const Vec3& x, const std::vector<double>& times,
                                                 const Scenario& s) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("decay_time_series: times must be sorted");
  std::vector<DecoherenceResult> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(condensate_amplitude(x, t, s));
  return out;
}

PhaseMoments phase_moments(const Vec3& x, const Scenario& s, MomentRoute route) {
  if (route == MomentRoute::Auto) {
    route = (s.quadrature.reduce_axisymmetric && moments_are_axisymmetric(x, s)) ? MomentRoute::SemiAnalytic
                                                                                 : MomentRoute::Full3D;
  }
  if (route != MomentRoute::Full3D && !moments_are_axisymmetric(x, s))
    throw std::invalid_argument("phase_moments: reduced routes need a z-directed field and x - center along z");
  switch (route) {
    case MomentRoute::SemiAnalytic:
      return moments_semi_analytic(x, s);
    case MomentRoute::Reduced2D:
      return moments_reduced(x, s);
    default:
      return moments_full(x, s);
  }
}

ABProfilePoint ab_profile(double z, const Scenario& s, bool allow_homogeneous_phase, MomentRoute route) {
  if (s.field.has_homogeneous_phase() || s.field.rabi0() == 0.0) {
    if (!allow_homogeneous_phase)
      throw std::invalid_argument(
          "ab_profile: the laser phase is spatially homogeneous (e.g. a standing wave), so A and B vanish "
          "identically; request them explicitly to get the zeros");
    return {z, 0.0, 0.0};
  }
  const PhaseMoments m = phase_moments(Vec3(s.mode.center.x(), s.mode.center.y(), z), s, route);
  const double gd = decoherence_rate(s.field, s.scales);
  const double ratio = atoms_per_n_lambda(s.mode, s.scales);
  return {z, -ratio * m.first / (3.0 * gd), ratio * m.second / (18.0 * gd * gd)};
}

}  // namespace decolight
