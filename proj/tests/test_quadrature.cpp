#include <cmath>
#include <numbers>

#include <doctest.h>

#include "decolight/error.hpp"
#include "decolight/quadrature.hpp"

using namespace decolight;

namespace {

constexpr double kPi = std::numbers::pi;

// int x^(2m) exp(-x^2) dx = Gamma(m + 1/2)
double hermite_moment(int degree) { return degree % 2 ? 0.0 : std::tgamma(degree / 2 + 0.5); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Hermite is exact up to degree 2n-1") {
    for (int n : {1, 2, 3, 5, 8, 16, 32, 64, 100}) {
      const GaussRule r = gauss_hermite_rule(n);
      REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
      for (int deg = 0; deg <= 2 * n - 1; ++deg) {
        // the terms x^deg w_i reach ~Gamma((deg+1)/2); compare relative to that scale
        double sum = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
          const double t = r.weights[i] * std::pow(r.nodes[i], deg);
          sum += t;
          scale += std::abs(t);
        }
        CHECK(std::abs(sum - hermite_moment(deg)) <= 1e-13 * scale);
      }
      // the next even degree is not integrated exactly
      if (n <= 16) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], 2 * n);
        CHECK(std::abs(sum - hermite_moment(2 * n)) > 1e-10 * hermite_moment(2 * n));
      }
    }
  }

  TEST_CASE("Gauss-Legendre is exact up to degree 2n-1") {
    for (int n : {2, 4, 8, 16, 24}) {
      const GaussRule r = gauss_legendre_rule(n);
      for (int deg = 0; deg <= 2 * n - 1; ++deg) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], deg);
        const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        CHECK(std::abs(sum - exact) < 1e-14);
      }
    }
  }

  TEST_CASE("plane wave average is the Gaussian form factor") {
    QuadratureSpec spec;
    for (double w : {0.5, 2.0, 5.0}) {
      const CondensateMode m(w, 1.0, Vec3(0.3, -0.1, 0.7));
      for (double kw : {0.0, 1.0, 5.0, 10.0, 15.0, 20.0}) {
        // the order/2 rule must resolve the oscillation too: order >~ (kw + 10)^2 / 4
        spec.order = kw <= 5.0 ? 64 : kw <= 10.0 ? 128 : 256;
        const double k = kw / w;
        const auto r = integrate_gaussian_weighted([k](const Vec3& x) { return std::polar(1.0, k * x.z()); }, m, spec);
        const Complex exact = std::exp(-kw * kw / 4.0) * std::polar(1.0, k * 0.7);
        CHECK(std::abs(r.value - exact) < 1e-10);
      }
    }
  }

  TEST_CASE("linearity and conjugation") {
    const CondensateMode m(1.5, 1.0);
    QuadratureSpec spec;
    spec.order = 32;
    auto f = [](const Vec3& x) { return std::polar(1.0 + x.x() * x.x(), 0.7 * x.y() + 0.2 * x.z()); };
    auto g = [](const Vec3& x) { return Complex(std::cos(x.norm()), x.z()); };
    const Complex a(0.3, -2.0);
    const auto lhs = integrate_gaussian_weighted([&](const Vec3& x) { return a * f(x) + g(x); }, m, spec);
    const auto rf = integrate_gaussian_weighted(f, m, spec);
    const auto rg = integrate_gaussian_weighted(g, m, spec);
    CHECK(std::abs(lhs.value - (a * rf.value + rg.value)) < 1e-13);
    const auto rc = integrate_gaussian_weighted([&](const Vec3& x) { return std::conj(f(x)); }, m, spec);
    CHECK(std::abs(rc.value - std::conj(rf.value)) < 1e-14);
  }

  TEST_CASE("adaptive tensor rule agrees with Gauss-Hermite") {
    const CondensateMode m(1.0, 1.0, Vec3(0.0, 0.0, 0.4));
    QuadratureSpec gh, ad;
    ad.method = QuadratureMethod::Adaptive;
    ad.order = 200;
    ad.tolerance = 1e-9;
    auto f = [](const Vec3& x) { return std::polar(1.0, 3.0 * x.z()) * (1.0 + x.x() * x.y()); };
    const auto a = integrate_gaussian_weighted(f, m, gh);
    const auto b = integrate_gaussian_weighted(f, m, ad);
    CHECK(std::abs(a.value - b.value) < 1e-8);
  }

  TEST_CASE("convergence report flags under-resolved orders") {
    const CondensateMode m(1.0, 1.0);
    auto f = [](const Vec3& x) { return std::polar(1.0, 5.0 * x.z()); };
    const auto rep = convergence_report(f, m, {4, 8, 16, 32, 64, 128}, 1e-10);
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows.front().slow);
    REQUIRE(rep.critical_order.has_value());
    CHECK(*rep.critical_order >= 16);
    CHECK(std::abs(rep.rows.back().value - std::exp(-6.25)) < 1e-12);
  }

  TEST_CASE("missed tolerance throws") {
    const CondensateMode m(1.0, 1.0);
    QuadratureSpec spec;
    spec.order = 8;
    CHECK_THROWS_AS(integrate_gaussian_weighted([](const Vec3& x) { return std::polar(1.0, 12.0 * x.z()); }, m, spec),
                    ConvergenceError);
    CHECK_THROWS_AS(integrate_gaussian_weighted([](const Vec3&) { return Complex(NAN, 0.0); }, m, QuadratureSpec{}),
                    ConvergenceError);
    spec.order = 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }

  TEST_CASE("one-dimensional adaptive Gauss-Kronrod") {
    const auto a = adaptive_gauss_kronrod([](double x) { return Complex(std::sin(x), 0.0); }, 0.0, kPi, 1e-13, 0.0, 50);
    CHECK(a.value.real() == doctest::Approx(2.0).epsilon(1e-13));
    // oscillatory: int_0^10 cos(40 x) e^{-x} dx
    const auto b = adaptive_gauss_kronrod([](double x) { return Complex(std::cos(40.0 * x) * std::exp(-x), 0.0); }, 0.0,
                                          10.0, 1e-12, 0.0, 400);
    const double exact = (1.0 + std::exp(-10.0) * (40.0 * std::sin(400.0) - std::cos(400.0))) / 1601.0;
    CHECK(b.value.real() == doctest::Approx(exact).epsilon(1e-10));
    const auto c = composite_gauss_legendre([](double x) { return Complex(x * x, 0.0); }, -1.0, 2.0, 3,
                                            gauss_legendre_rule(4));
    CHECK(c.value.real() == doctest::Approx(3.0).epsilon(1e-14));
  }

  TEST_CASE("axisymmetric reduction: normalization and plane waves") {
    QuadratureSpec spec;
    for (double w : {1.0, 4.0, 30.0}) {
      for (double s : {0.0, 1.0, -1.0, 2.5}) {
        const double offset = s * w;
        auto one = [](double) { return AxisymmetricRow([](double) { return Complex(1.0, 0.0); }); };
        const auto n = integrate_axisymmetric(one, offset, w, 1.0 / w, spec);
        CHECK(std::abs(n.value - 1.0) < 1e-12);
        for (double kw : {1.0, 4.0, 10.0}) {
          const double k = kw / w;
          // x' - x = r n, so e^{ik(z' - x_z)} = e^{i k r mu}
          auto row = [k](double r) { return AxisymmetricRow([k, r](double mu) { return std::polar(1.0, k * r * mu); }); };
          const auto q = integrate_axisymmetric(row, offset, w, 2.0 * k, spec);
          const Complex exact = std::exp(-kw * kw / 4.0) * std::polar(1.0, -k * offset);
          CHECK(std::abs(q.value - exact) < 1e-11);
        }
      }
    }
  }

  TEST_CASE("radial quadrature of a Gaussian shell") {
    // int_0^R r^2 e^{-r^2/w^2} dr * 4 / (sqrt(pi) w^3) = 1
    const double w = 3.0;
    auto h = [w](double r) { return Complex(4.0 / (std::sqrt(kPi) * w * w * w) * r * r * std::exp(-r * r / (w * w)), 0.0); };
    const auto q = integrate_radial(h, 0.0, w, 1.0, QuadratureSpec{});
    CHECK(q.value.real() == doctest::Approx(1.0).epsilon(1e-13));
  }
}
