#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "decolight/observables.hpp"

using namespace decolight;

namespace {

const PhysicalScales unit(1.0, 1.0, 1e6);

// Small condensate (k w ~ 3) where the tensor Gauss-Hermite rule is cheap,
// so every integration route can be compared.
Scenario small_running(const Vec3& dipole = Vec3::UnitX()) {
  Scenario s{unit, LaserField::running_wave(1.0, 1.0, 1.1), CondensateMode(3.0, 2.0), DipoleOrientation(dipole)};
  s.quadrature.order = 128;
  return s;
}

// tests/reference/derive.py: <J sin(k zeta)>, <(J sin(k zeta))^2> and
// <exp(-2 i J sin(k zeta)) - 1> for w = 3, k = 1.1, x = 1.5 z-hat
struct Reference {
  double m1, m2;
  Complex s;
};
const Reference kRefX{-3.13554532647801337e-02, 2.11781533356582598e-02,
                      {-4.11427042140858693e-02, 6.01492121086913689e-02}};
const Reference kRefZ{-1.85336415416659100e-02, 2.28251548132430565e-02,
                      {-4.38717890317111489e-02, 3.39856371012844174e-02}};

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("single-particle factor and phase angle") {
    CHECK(single_particle_factor(Complex(3.0, 4.0), 10.0, 2.0, PhysicalScales(1.0, 0.5)) ==
          doctest::Approx(std::exp(-0.5 * 0.5 * 2.0 * 25.0 / 100.0)));
    CHECK_THROWS_AS(single_particle_factor(1.0, 1.0, -1.0, unit), std::invalid_argument);
    // Theta = -(3/2) gamma0 t J Im[Omega(x') Omega*(x)] / Delta^2
    const Complex ox(1.0, 2.0), oxp(-0.5, 1.5);
    const double im = (oxp * std::conj(ox)).imag();
    CHECK(phase_angle(ox, oxp, 0.4, 2.0, 5.0, PhysicalScales(1.0, 3.0)) ==
          doctest::Approx(-1.5 * 3.0 * 2.0 * 0.4 * im / 25.0).epsilon(1e-15));
    CHECK(theta_rate_prefactor(PhysicalScales(1.0, 2.0), 4.0) == doctest::Approx(-3.0 / 16.0));
  }

  TEST_CASE("helpers without cancellation") {
    for (double th : {1e-12, 1e-6, 0.3, 2.0, -1.0}) {
      const Complex e = expm1_i(th);
      CHECK(std::abs(e - (std::polar(1.0, th) - 1.0)) < 1e-15);
    }
    CHECK(expm1_i(1e-10).real() == doctest::Approx(-5e-21).epsilon(1e-12));
    CHECK(bessel_j0_minus_one(1e-5) == doctest::Approx(-2.5e-11).epsilon(1e-9));
    for (double x : {0.5, 3.0, 7.9, 8.1, 20.0, 150.0})
      CHECK(bessel_j0_minus_one(x) == doctest::Approx(std::cyl_bessel_j(0.0, x) - 1.0).epsilon(1e-13).scale(1.0));
  }

  TEST_CASE("light only modulates the phase of the mode") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-6.0, 6.0), tt(0.0, 50.0);
    const Scenario s = small_running(Vec3(1.0, 0.5, -0.3));
    for (int i = 0; i < 2000; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng)), xp(u(rng), u(rng), u(rng));
      CHECK(std::abs(std::abs(mode_tilde(x, xp, tt(rng), s)) - mode_at(s.mode, xp)) < 1e-14 * std::max(1.0, s.mode.peak()));
    }
  }

  TEST_CASE("phase moments against the independent reference") {
    for (const auto& [dip, ref] : {std::pair{Vec3::UnitX(), kRefX}, std::pair{Vec3::UnitZ(), kRefZ}}) {
      const Scenario s = small_running(dip);
      const Vec3 x(0.0, 0.0, 1.5);
      for (MomentRoute route : {MomentRoute::SemiAnalytic, MomentRoute::Reduced2D, MomentRoute::Full3D}) {
        const PhaseMoments m = phase_moments(x, s, route);
        INFO("route " << static_cast<int>(route));
        CHECK(m.first == doctest::Approx(-1.5 * ref.m1).epsilon(1e-9));
        CHECK(m.second == doctest::Approx(2.25 * ref.m2).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("overlap against the independent reference") {
    // -(3/2) t = -2
    const double t = 4.0 / 3.0;
    for (const auto& [dip, ref] : {std::pair{Vec3::UnitX(), kRefX}, std::pair{Vec3::UnitZ(), kRefZ}}) {
      Scenario s = small_running(dip);
      const Vec3 x(0.0, 0.0, 1.5);
      REQUIRE(overlap_is_axisymmetric(x, s));
      const OverlapResult reduced = overlap(x, t, s);
      CHECK(reduced.reduced);
      CHECK(std::abs(reduced.deficit - ref.s) < 1e-10);
      CHECK(std::abs(reduced.value - (1.0 + ref.s)) < 1e-10);
      // the order/2 estimate is pessimistic for the tensor rule here
      s.quadrature.reduce_axisymmetric = false;
      s.quadrature.tolerance = 1e-3;
      const OverlapResult full = overlap(x, t, s);
      CHECK_FALSE(full.reduced);
      CHECK(std::abs(full.deficit - ref.s) < 1e-6);
    }
  }

  TEST_CASE("tilted dipole falls back to the full integral") {
    Scenario s = small_running(Vec3(1.0, 0.0, 1.0));
    s.quadrature.tolerance = 1e-5;
    const Vec3 x(0.0, 0.0, 1.5);
    CHECK_FALSE(overlap_is_axisymmetric(x, s));
    const OverlapResult o = overlap(x, 0.5, s);
    CHECK_FALSE(o.reduced);
    CHECK(std::abs(o.value) <= 1.0);
    // the azimuthally averaged kernel of a 45 degree dipole is the mean of the x and z ones
    const PhaseMoments m = phase_moments(x, s);
    CHECK(m.first == doctest::Approx(-1.5 * 0.5 * (kRefX.m1 + kRefZ.m1)).epsilon(1e-8));
  }

  TEST_CASE("short-time limit of the overlap matches the moments") {
    const Scenario s = small_running();
    const Vec3 x(0.0, 0.0, -2.0);
    const PhaseMoments m = phase_moments(x, s);
    const double t = 1e-4;
    const OverlapResult o = overlap(x, t, s);
    const Complex expect(-0.5 * m.second * t * t, m.first * t);
    CHECK(std::abs(o.deficit - expect) < 1e-3 * std::abs(expect));
  }

  TEST_CASE("homogeneous phase leaves only the single-particle decay") {
    const Scenario s{unit, LaserField::standing_wave(1.0, 1.0, 1.1), CondensateMode(3.0, 2.0)};
    for (double t : {0.0, 0.5, 3.0}) {
      const Vec3 x(0.0, 0.0, 0.7);
      const DecoherenceResult r = condensate_amplitude(x, t, s);
      CHECK(std::abs(r.overlap - 1.0) < 1e-12);
      const Complex single = s.mode.alpha * mode_at(s.mode, x) * single_particle_factor(s.field, x, t, unit);
      CHECK(std::abs(r.amplitude - single) < 1e-12);
    }
    CHECK_THROWS_AS(ab_profile(0.0, s), std::invalid_argument);
    const ABProfilePoint p = ab_profile(1.0, s, true);
    CHECK(p.A == 0.0);
    CHECK(p.B == 0.0);
  }

  TEST_CASE("amplitude assembly") {
    const Scenario s = small_running();
    const Vec3 x(0.0, 0.0, 1.5);
    const double t = 4.0 / 3.0;
    const DecoherenceResult r = condensate_amplitude(x, t, s);
    const Complex expect = s.mode.alpha * mode_at(s.mode, x) * single_particle_factor(s.field, x, t, unit) *
                           std::exp(s.mode.atom_number() * kRefX.s);
    CHECK(std::abs(r.amplitude - expect) < 1e-9 * std::abs(expect));
    const DecoherenceResult zero = condensate_amplitude(x, 0.0, s);
    CHECK(zero.overlap == Complex(1.0, 0.0));
    CHECK(zero.single_particle_factor == 1.0);
  }

  TEST_CASE("time series") {
    const Scenario s = small_running();
    const auto series = decay_time_series(Vec3(0.0, 0.0, 1.0), {0.0, 0.5, 1.0, 2.0}, s);
    REQUIRE(series.size() == 4);
    for (std::size_t i = 1; i < series.size(); ++i)
      CHECK(std::abs(series[i].amplitude) <= std::abs(series[i - 1].amplitude));
    CHECK_THROWS_AS(decay_time_series(Vec3::Zero(), {1.0, 0.5}, s), std::invalid_argument);
  }

  TEST_CASE("profile symmetries") {
    Scenario s{unit, LaserField::running_wave(0.02 * 160.0, 160.0, 1.0001), CondensateMode(30.0, 100.0)};
    CHECK(std::abs(ab_profile(0.0, s).A) < 1e-12);
    for (double z : {10.0, 30.0, 75.0}) {
      const ABProfilePoint p = ab_profile(z, s), m = ab_profile(-z, s);
      CHECK(p.A == doctest::Approx(-m.A).epsilon(1e-10));
      CHECK(p.B == doctest::Approx(m.B).epsilon(1e-10));
      CHECK(p.B >= 0.0);
    }
    // the three routes agree at moderate k w
    Scenario low{unit, LaserField::running_wave(1.0, 1.0, 1.0), CondensateMode(2.5, 1.0)};
    low.quadrature.order = 128;
    for (double z : {0.0, 2.0}) {
      const ABProfilePoint a = ab_profile(z, low, false, MomentRoute::SemiAnalytic);
      const ABProfilePoint b = ab_profile(z, low, false, MomentRoute::Reduced2D);
      const ABProfilePoint c = ab_profile(z, low, false, MomentRoute::Full3D);
      CHECK(a.A == doctest::Approx(b.A).epsilon(1e-9).scale(1e-3));
      CHECK(a.A == doctest::Approx(c.A).epsilon(1e-8).scale(1e-3));
      CHECK(a.B == doctest::Approx(b.B).epsilon(1e-9));
      CHECK(a.B == doctest::Approx(c.B).epsilon(1e-8));
    }
  }
}
