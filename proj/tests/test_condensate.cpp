#include <cmath>
#include <numbers>

#include <doctest.h>

#include "decolight/condensate.hpp"
#include "decolight/quadrature.hpp"

using namespace decolight;

TEST_SUITE("condensate") {
  TEST_CASE("mode is normalized and peaks at the centre") {
    const CondensateMode m(2.5, Complex(3.0, 4.0), Vec3(1.0, -2.0, 0.5));
    CHECK(m.atom_number() == doctest::Approx(25.0));
    CHECK(mode_at(m, m.center) == doctest::Approx(m.peak()));
    CHECK(m.peak() == doctest::Approx(std::pow(2.5, -1.5) * std::pow(std::numbers::pi, -0.75)));
    CHECK(mode_at(m, m.center + Vec3(0.0, 2.5, 0.0)) == doctest::Approx(m.peak() * std::exp(-0.5)));

    QuadratureSpec spec;
    spec.order = 16;
    // integrate_gaussian_weighted already carries |phi0|^2; check it against a direct sum
    const auto r = integrate_gaussian_weighted([](const Vec3&) { return Complex(1.0, 0.0); }, m, spec);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-14));
    const GaussRule gh = gauss_hermite_rule(24);
    double sum = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      for (std::size_t j = 0; j < gh.nodes.size(); ++j)
        for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
          // x = c + w xi turns phi0^2 into exp(-|xi|^2) / (pi^1.5 w^3)
          const Vec3 x = m.center + 2.5 * Vec3(gh.nodes[i], gh.nodes[j], gh.nodes[k]);
          const double v = mode_at(m, x);
          const double xi2 = gh.nodes[i] * gh.nodes[i] + gh.nodes[j] * gh.nodes[j] + gh.nodes[k] * gh.nodes[k];
          sum += gh.weights[i] * gh.weights[j] * gh.weights[k] * v * v * std::exp(xi2);
        }
    CHECK(sum * std::pow(2.5, 3) == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("N_lambda for the default condensate") {
    // mpmath: (1e6 / (100^3 pi^1.5)) (2 pi)^3 and pi^1.5 100^3 / (2 pi)^3
    const CondensateMode m(100.0, 1000.0);
    const PhysicalScales s(1.0, 1.0);
    CHECK(n_lambda(m, s) == doctest::Approx(44.546623974653662762).epsilon(1e-14));
    CHECK(atoms_per_n_lambda(m, s) == doctest::Approx(22448.390265645820211).epsilon(1e-14));
    CHECK(atoms_per_n_lambda(CondensateMode(100.0, 0.0), s) == doctest::Approx(22448.390265645820211).epsilon(1e-14));
  }

  TEST_CASE("invalid modes") {
    CHECK_THROWS_AS(CondensateMode(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CondensateMode(-1.0, 1.0), std::invalid_argument);
  }
}
