#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "decolight/condensate.hpp"
#include "decolight/laser_field.hpp"
#include "decolight/physics_kernel.hpp"

namespace decolight {

using Complex = std::complex<double>;

/// Few-site discretization of the ground-state field. Psi(x_a) -> a_a/sqrt(dV),
/// rho(x_a) -> n_a/dV, integrals -> sums times dV.
struct LatticeModel {
  std::vector<Vec3> sites;
  double cell_volume = 1.0;
  std::vector<Complex> rabi;  // Omega at each site
  Eigen::MatrixXd kernel;     // J(x_a - x_b), 2/3 on the diagonal
  double detuning = 1.0;
  PhysicalScales scales{1.0, 1.0};

  static LatticeModel from_field(std::vector<Vec3> sites, double cell_volume, const LaserField& field,
                                 const DipoleOrientation& dipole, const PhysicalScales& scales);
  static LatticeModel from_values(std::vector<Vec3> sites, double cell_volume, std::vector<Complex> rabi,
                                  double detuning, const DipoleOrientation& dipole, const PhysicalScales& scales);

  std::size_t size() const { return sites.size(); }
};

/// Bosonic Fock space on M modes truncated to total occupation <= n_max.
class FockSpace {
 public:
  FockSpace(int modes, int n_max);

  int modes() const { return modes_; }
  int n_max() const { return n_max_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<int>& occupation(Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }
  int total(Eigen::Index i) const;
  /// Index of an occupation tuple, or -1 when it lies outside the space.
  Eigen::Index index_of(const std::vector<int>& occ) const;

  Eigen::MatrixXcd annihilation(int mode) const;
  Eigen::MatrixXcd number(int mode) const;
  Eigen::VectorXd number_diagonal(int mode) const;

 private:
  int modes_;
  int n_max_;
  std::vector<std::vector<int>> basis_;
  std::map<std::vector<int>, Eigen::Index> index_;
};

/// Product coherent state prod_a |alpha_a>, truncated and renormalized.
struct CoherentStateVector {
  std::vector<Complex> amplitudes;
  Eigen::VectorXcd state;
  double truncated_norm = 1.0;  // norm before renormalization

  static CoherentStateVector make(const FockSpace& space, std::vector<Complex> amplitudes);
  double mean_atoms() const;
};

/// alpha phi0(x_a) sqrt(dV): the site amplitudes of a condensate in `mode`.
std::vector<Complex> mode_amplitudes(const LatticeModel& model, const CondensateMode& mode);

/// Coefficients c_a of Q_obs = sum_a c_a n_a, c_a = (3 gamma0/4 Delta^2) J_{a,obs} Omega_a Omega*_obs.
/// The cell volume cancels between rho -> n/dV and the integral -> sum dV.
Eigen::VectorXcd q_coefficients(const LatticeModel& model, int obs_site);
Eigen::MatrixXcd build_q_operator(const LatticeModel& model, int obs_site, const FockSpace& space);

struct CantrafoReport {
  double max_deviation = 0.0;               // over all b and all matrix entries
  double max_deviation_below_cutoff = 0.0;  // entries with source shell < n_max
  /// |q_obs,obs - gamma0 |Omega_obs|^2 / (2 Delta^2)|, the continuum single-particle rate
  double continuum_rate_deviation = 0.0;
};

/// Checks e^{tQ} a_b e^{-tQ} = e^{-t c_b} a_b for Q = Q_obs (dense exponentials, no
/// structural shortcut), for every site b.
CantrafoReport verify_cantrafo(const LatticeModel& model, const FockSpace& space, double t, int obs_site);

enum class ThetaSign { Physical, Flipped };
enum class ExpmPath { Generic, Structured };

struct AmplitudeComparison {
  Complex brute_force;
  Complex analytic;
  double deviation() const { return std::abs(brute_force - analytic); }
};

/// brute_force = <alpha| e^{tQ^dag} a_obs e^{-tQ} |alpha> by dense linear algebra;
/// analytic = alpha_obs spf exp(sum_a |alpha_a|^2 (e^{i Theta_a} - 1)) built from
/// the observables' phase_angle and single_particle_factor.
AmplitudeComparison verify_amplitude(const LatticeModel& model, const FockSpace& space,
                                     const CoherentStateVector& coherent, double t, int obs_site,
                                     ThetaSign sign = ThetaSign::Physical, ExpmPath path = ExpmPath::Generic);

/// Discrete ground-state Liouvillean
///   L_g R = (3 gamma0/4 Delta^2) sum_ab Omega*_a Omega_b J_ab ([R, n_a] n_b - n_a [R, n_b]).
Eigen::MatrixXcd apply_liouvillean_g(const LatticeModel& model, const FockSpace& space, const Eigen::MatrixXcd& r);

struct DensityReport {
  double number_deviation = 0.0;       // max |L_g n_a|
  double annihilation_response = 0.0;  // max |L_g a_a|
  /// max |L_g a_obs + (Q^dag a_obs - a_obs Q)| over obs sites
  double reduction_deviation = 0.0;
};

DensityReport verify_density_conservation(const LatticeModel& model, const FockSpace& space);

/// max |sum_n (-t)^n/n! L_g^n a_obs - e^{tQ^dag} a_obs e^{-tQ}|.
double verify_evolution(const LatticeModel& model, const FockSpace& space, double t, int obs_site);

/// Poisson weight of a coherent state with `mean_atoms` lying above the cutoff.
double truncation_tail(double mean_atoms, int n_max);

struct OracleSettings {
  int sites = 2;
  double spacing = 1.0;  // along z, in units of 1/k0
  int n_max = 12;
  double atom_number = 1.0;  // total, split evenly over the sites
  double rabi_over_detuning = 1.0;
  std::vector<double> times{0.01, 0.1, 0.5};  // gamma0 t
  bool flip_theta_sign = false;               // negative control

  bool operator==(const OracleSettings&) const = default;
};

struct OracleCheck {
  std::string name;
  double deviation;
  double threshold;
  bool passed;
};

/// Runs every lattice identity check. `geometry` supplies the laser
/// components and detuning; its rabi0 is replaced by
/// settings.rabi_over_detuning * detuning. Throws std::invalid_argument for
/// truncation-unsafe settings (truncation_tail above 1e-10).
std::vector<OracleCheck> run_oracle_suite(const OracleSettings& settings, const LaserField& geometry,
                                          const DipoleOrientation& dipole, const PhysicalScales& scales);

}  // namespace decolight
