#include <cmath>
#include <numbers>

#include <doctest.h>

#include "decolight/fock_oracle.hpp"
#include "decolight/observables.hpp"

using namespace decolight;

namespace {

const PhysicalScales unit(1.0, 1.0, 1e6);

// Two sites along z, one wavelength-ish apart, strongly driven so the
// identities are tested far from their trivial limit.
LatticeModel two_sites(double rabi_over_detuning = 1.0) {
  const double delta = 3.0;
  const auto field = LaserField::running_wave(rabi_over_detuning * delta, delta, 1.0);
  return LatticeModel::from_field({Vec3::Zero(), Vec3(0.0, 0.0, 1.0)}, 1.0, field, DipoleOrientation::transverse(),
                                  unit);
}

double binomial(int n, int k) { return std::round(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0))); }

}  // namespace

TEST_SUITE("fock_oracle") {
  TEST_CASE("Fock space enumeration") {
    for (int m : {1, 2, 3, 4})
      for (int n : {0, 1, 4, 7}) {
        const FockSpace s(m, n);
        CHECK(s.dimension() == static_cast<Eigen::Index>(binomial(n + m, m)));
        for (Eigen::Index i = 0; i < s.dimension(); ++i) CHECK(s.index_of(s.occupation(i)) == i);
      }
    const FockSpace s(2, 3);
    CHECK(s.index_of({4, 0}) == -1);
    CHECK(s.index_of({1, 1}) >= 0);
  }

  TEST_CASE("ladder operators") {
    const FockSpace s(2, 6);
    const Eigen::MatrixXcd a0 = s.annihilation(0), a1 = s.annihilation(1);
    // [a, a^dag] = 1 on states below the cutoff
    const Eigen::MatrixXcd comm = a0 * a0.adjoint() - a0.adjoint() * a0;
    const Eigen::MatrixXcd mixed = a0 * a1 - a1 * a0;
    for (Eigen::Index j = 0; j < s.dimension(); ++j) {
      if (s.total(j) >= s.n_max()) continue;
      for (Eigen::Index i = 0; i < s.dimension(); ++i) CHECK(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
    CHECK(mixed.cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a0.adjoint() * a0 - s.number(0)).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("coherent state vector") {
    const FockSpace s(2, 14);
    const auto c = CoherentStateVector::make(s, {Complex(0.6, 0.2), Complex(-0.3, 0.5)});
    CHECK(c.state.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.truncated_norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.mean_atoms() == doctest::Approx(0.4 + 0.34));
    // <a_0> reproduces the amplitude up to truncation
    const Complex mean = c.state.dot(s.annihilation(0) * c.state);
    CHECK(std::abs(mean - Complex(0.6, 0.2)) < 1e-10);
  }

  TEST_CASE("Poisson tail of the truncation") {
    // mpmath: sum_{k>12} e^{-1}/k!
    CHECK(truncation_tail(1.0, 12) == doctest::Approx(6.3597773271341418993e-11).epsilon(1e-12));
    CHECK(truncation_tail(0.0, 3) == 0.0);
    CHECK(truncation_tail(4.0, 12) > 1e-4);
  }

  TEST_CASE("Q coefficients carry the single-particle rate") {
    const LatticeModel m = two_sites(0.5);
    const Eigen::VectorXcd c = q_coefficients(m, 0);
    const double delta = m.detuning;
    // c_obs = (3 gamma0 / 4 Delta^2) (2/3) |Omega|^2 = gamma0 |Omega|^2 / (2 Delta^2)
    CHECK(std::abs(c[0] - 0.5 * std::norm(m.rabi[0]) / (delta * delta)) < 1e-15);
    CHECK(std::abs(c[1] - 0.75 / (delta * delta) * m.kernel(1, 0) * m.rabi[1] * std::conj(m.rabi[0])) < 1e-15);
    CHECK(m.kernel(0, 0) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("canonical transformation of the annihilators") {
    const LatticeModel m = two_sites();
    const FockSpace s(2, 8);
    for (double t : {0.0, 0.01, 0.5, 2.0}) {
      const CantrafoReport r = verify_cantrafo(m, s, t, 0);
      CHECK(r.max_deviation < 1e-12);
      CHECK(r.continuum_rate_deviation < 1e-15);
    }
  }

  TEST_CASE("brute force amplitude equals the closed form") {
    const LatticeModel m = two_sites();
    const FockSpace s(2, 12);
    const auto c = CoherentStateVector::make(s, {Complex(std::sqrt(0.5), 0.0), Complex(0.0, std::sqrt(0.5))});
    for (double t : {0.01, 0.1, 0.5}) {
      const auto g = verify_amplitude(m, s, c, t, 0, ThetaSign::Physical, ExpmPath::Generic);
      const auto d = verify_amplitude(m, s, c, t, 0, ThetaSign::Physical, ExpmPath::Structured);
      CHECK(g.deviation() < 1e-8);
      CHECK(std::abs(g.brute_force - d.brute_force) < 1e-13);
      const auto flipped = verify_amplitude(m, s, c, t, 0, ThetaSign::Flipped);
      CHECK(flipped.deviation() > 1e6 * g.deviation());
      // the other site as observation point
      CHECK(verify_amplitude(m, s, c, t, 1).deviation() < 1e-8);
    }
  }

  TEST_CASE("no light means nothing happens") {
    const LatticeModel m = two_sites(0.0);
    const FockSpace s(2, 10);
    const auto c = CoherentStateVector::make(s, {0.7, 0.2});
    const auto a = verify_amplitude(m, s, c, 0.5, 0);
    CHECK(a.deviation() < 1e-9);
    CHECK(std::abs(a.analytic - Complex(0.7, 0.0)) < 1e-15);
    const DensityReport d = verify_density_conservation(m, s);
    CHECK(d.number_deviation == 0.0);
    CHECK(d.annihilation_response == 0.0);
  }

  TEST_CASE("truncation-unsafe coherent states are rejected") {
    const LatticeModel m = two_sites();
    const FockSpace s(2, 6);
    const auto c = CoherentStateVector::make(s, {2.0, 2.0});
    CHECK_THROWS_AS(verify_amplitude(m, s, c, 0.1, 0), std::invalid_argument);
  }

  TEST_CASE("ground-state Liouvillean conserves density") {
    for (int sites : {1, 2, 3}) {
      std::vector<Vec3> pos;
      for (int a = 0; a < sites; ++a) pos.emplace_back(0.0, 0.3 * a, 0.8 * a);
      const auto field = LaserField::running_wave(2.0, 2.0, 1.2);
      const LatticeModel m = LatticeModel::from_field(pos, 1.0, field, DipoleOrientation(Vec3(1, 1, 0)), unit);
      const FockSpace s(sites, sites == 3 ? 6 : 9);
      const DensityReport d = verify_density_conservation(m, s);
      CHECK(d.number_deviation < 1e-12);
      CHECK(d.annihilation_response > 1e-3);
      CHECK(d.reduction_deviation < 1e-12);
    }
  }

  TEST_CASE("series of the Liouvillean reproduces the closed-form evolution") {
    const LatticeModel m = two_sites();
    const FockSpace s(2, 7);
    for (double t : {0.01, 0.5}) CHECK(verify_evolution(m, s, t, 0) < 1e-10);
  }

  TEST_CASE("oracle suite") {
    const auto geometry = LaserField::running_wave(1.0, 30.0, 1.0);
    OracleSettings st;
    SUBCASE("default settings pass") {
      for (const auto& c : run_oracle_suite(st, geometry, DipoleOrientation::transverse(), unit)) {
        INFO(c.name << " deviation " << c.deviation);
        CHECK(c.passed);
      }
    }

    SUBCASE("negative control fails") {
      st.flip_theta_sign = true;
      bool any_amplitude_failed = false;
      for (const auto& c : run_oracle_suite(st, geometry, DipoleOrientation::transverse(), unit))
        if (c.name.rfind("amplitude", 0) == 0 && !c.passed) any_amplitude_failed = true;
      CHECK(any_amplitude_failed);
    }
    SUBCASE("unsafe settings rejected") {
      st.atom_number = 3.0;
      CHECK_THROWS_AS(run_oracle_suite(st, geometry, DipoleOrientation::transverse(), unit), std::invalid_argument);
      st.atom_number = 1.0;
      st.sites = 5;
      CHECK_THROWS_AS(run_oracle_suite(st, geometry, DipoleOrientation::transverse(), unit), std::invalid_argument);
    }
    SUBCASE("zero light passes with zero deviations") {
      st.rabi_over_detuning = 0.0;
      for (const auto& c : run_oracle_suite(st, geometry, DipoleOrientation::transverse(), unit)) {
        INFO(c.name);
        CHECK(c.passed);
        if (c.name.rfind("truncation", 0) != 0 && c.name.rfind("amplitude", 0) != 0) CHECK(c.deviation == 0.0);
      }
    }
  }
}
