#include "decolight/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "decolight/matrix_exp.hpp"
#include "decolight/observables.hpp"

namespace decolight {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_site(const LatticeModel& model, int obs) {
  if (obs < 0 || static_cast<std::size_t>(obs) >= model.size())
    throw std::out_of_range("lattice: observation site index out of range");
}

void check_space(const LatticeModel& model, const FockSpace& space) {
  if (static_cast<std::size_t>(space.modes()) != model.size())
    throw std::invalid_argument("lattice: Fock space mode count differs from the number of sites");
}

// a_mode applied to a state vector without forming the matrix.
Vec apply_annihilation(const FockSpace& space, int mode, const Vec& v) {
  Vec out = Vec::Zero(space.dimension());
  for (Eigen::Index j = 0; j < space.dimension(); ++j) {
    const auto& occ = space.occupation(j);
    if (occ[mode] == 0 || v[j] == Complex(0.0, 0.0)) continue;
    auto lowered = occ;
    --lowered[mode];
    out[space.index_of(lowered)] += std::sqrt(static_cast<double>(occ[mode])) * v[j];
  }
  return out;
}

Vec q_diagonal(const LatticeModel& model, int obs, const FockSpace& space) {
  const Eigen::VectorXcd c = q_coefficients(model, obs);
  Vec d = Vec::Zero(space.dimension());
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    for (int a = 0; a < space.modes(); ++a) d[i] += c[a] * static_cast<double>(occ[a]);
  }
  return d;
}

Eigen::Index binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<Eigen::Index>(std::llround(r));
}

// Largest cutoff <= n_max whose dense matrices stay below `max_dim`.
int affordable_cutoff(int modes, int n_max, Eigen::Index max_dim) {
  int n = n_max;
  while (n > 1 && binomial(n + modes, modes) > max_dim) --n;
  return n;
}

std::string fmt(const char* name, double value) {
  std::ostringstream os;
  os << name << value;
  return os.str();
}

}  // namespace

LatticeModel LatticeModel::from_values(std::vector<Vec3> sites, double cell_volume, std::vector<Complex> rabi,
                                       double detuning, const DipoleOrientation& dipole,
                                       const PhysicalScales& scales) {
  if (sites.empty()) throw std::invalid_argument("lattice: needs at least one site");
  if (rabi.size() != sites.size()) throw std::invalid_argument("lattice: one Rabi frequency per site");
  if (!(cell_volume > 0.0)) throw std::invalid_argument("lattice: cell volume must be > 0");
  if (detuning == 0.0) throw std::invalid_argument("lattice: detuning must be non-zero");
  LatticeModel m;
  m.sites = std::move(sites);
  m.cell_volume = cell_volume;
  m.rabi = std::move(rabi);
  m.detuning = detuning;
  m.scales = scales;
  const auto n = static_cast<Eigen::Index>(m.sites.size());
  m.kernel.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) m.kernel(a, b) = dipole_kernel(m.sites[a] - m.sites[b], dipole, scales);
  return m;
}

LatticeModel LatticeModel::from_field(std::vector<Vec3> sites, double cell_volume, const LaserField& field,
                                      const DipoleOrientation& dipole, const PhysicalScales& scales) {
  std::vector<Complex> rabi;
  rabi.reserve(sites.size());
  for (const auto& x : sites) rabi.push_back(rabi_at(field, x));
  return from_values(std::move(sites), cell_volume, std::move(rabi), field.detuning(), dipole, scales);
}

FockSpace::FockSpace(int modes, int n_max) : modes_(modes), n_max_(n_max) {
  if (modes < 1) throw std::invalid_argument("FockSpace: needs at least one mode");
  if (n_max < 0) throw std::invalid_argument("FockSpace: n_max must be >= 0");
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  // shells of increasing total number, lexicographic inside a shell
  for (int total = 0; total <= n_max; ++total) {
    std::fill(occ.begin(), occ.end(), 0);
    occ[0] = total;
    while (true) {
      basis_.push_back(occ);
      // next composition of `total` into `modes` parts
      int i = 0;
      while (i < modes - 1 && occ[i] == 0) ++i;
      if (i == modes - 1) break;
      const int carry = occ[i] - 1;
      occ[i] = 0;
      occ[0] = carry;
      ++occ[i + 1];
    }
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], static_cast<Eigen::Index>(i));
}

int FockSpace::total(Eigen::Index i) const {
  int s = 0;
  for (int n : occupation(i)) s += n;
  return s;
}

Eigen::Index FockSpace::index_of(const std::vector<int>& occ) const {
  const auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

Eigen::MatrixXcd FockSpace::annihilation(int mode) const {
  if (mode < 0 || mode >= modes_) throw std::out_of_range("FockSpace: mode index out of range");
  Mat a = Mat::Zero(dimension(), dimension());
  for (Eigen::Index j = 0; j < dimension(); ++j) {
    const auto& occ = occupation(j);
    if (occ[mode] == 0) continue;
    auto lowered = occ;
    --lowered[mode];
    a(index_of(lowered), j) = std::sqrt(static_cast<double>(occ[mode]));
  }
  return a;
}

Eigen::VectorXd FockSpace::number_diagonal(int mode) const {
  if (mode < 0 || mode >= modes_) throw std::out_of_range("FockSpace: mode index out of range");
  Eigen::VectorXd d(dimension());
  for (Eigen::Index i = 0; i < dimension(); ++i) d[i] = occupation(i)[mode];
  return d;
}

Eigen::MatrixXcd FockSpace::number(int mode) const {
  return number_diagonal(mode).cast<Complex>().asDiagonal();
}

CoherentStateVector CoherentStateVector::make(const FockSpace& space, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != static_cast<std::size_t>(space.modes()))
    throw std::invalid_argument("coherent state: one amplitude per mode");
  CoherentStateVector c;
  c.amplitudes = std::move(amplitudes);
  c.state.resize(space.dimension());
  double mean = 0.0;
  for (const auto& a : c.amplitudes) mean += std::norm(a);
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    Complex v = std::exp(-0.5 * mean);
    const auto& occ = space.occupation(i);
    for (int m = 0; m < space.modes(); ++m)
      v *= std::pow(c.amplitudes[m], occ[m]) / std::sqrt(std::tgamma(occ[m] + 1.0));
    c.state[i] = v;
  }
  c.truncated_norm = c.state.norm();
  c.state /= c.truncated_norm;
  return c;
}

double CoherentStateVector::mean_atoms() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

std::vector<Complex> mode_amplitudes(const LatticeModel& model, const CondensateMode& mode) {
  std::vector<Complex> out;
  out.reserve(model.size());
  for (const auto& x : model.sites) out.push_back(mode.alpha * mode_at(mode, x) * std::sqrt(model.cell_volume));
  return out;
}

Eigen::VectorXcd q_coefficients(const LatticeModel& model, int obs) {
  check_site(model, obs);
  const double pref = 0.75 * model.scales.gamma0() / (model.detuning * model.detuning);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(model.size()));
  for (std::size_t a = 0; a < model.size(); ++a)
    c[a] = pref * model.kernel(a, obs) * model.rabi[a] * std::conj(model.rabi[obs]);
  return c;
}

Eigen::MatrixXcd build_q_operator(const LatticeModel& model, int obs, const FockSpace& space) {
  check_space(model, space);
  const Eigen::VectorXcd c = q_coefficients(model, obs);
  Mat q = Mat::Zero(space.dimension(), space.dimension());
  for (int a = 0; a < space.modes(); ++a) q += c[a] * space.number(a);
  return q;
}

CantrafoReport verify_cantrafo(const LatticeModel& model, const FockSpace& space, double t, int obs) {
  if (!(t >= 0.0)) throw std::invalid_argument("verify_cantrafo: t must be >= 0");
  check_space(model, space);
  const Mat q = build_q_operator(model, obs, space);
  const Mat plus = expm(t * q);
  const Mat minus = expm(-t * q);
  const Eigen::VectorXcd c = q_coefficients(model, obs);
  CantrafoReport rep;
  for (int b = 0; b < space.modes(); ++b) {
    const Mat a = space.annihilation(b);
    const Mat dev = plus * a * minus - std::exp(-t * c[b]) * a;
    rep.max_deviation = std::max(rep.max_deviation, max_abs(dev));
    for (Eigen::Index j = 0; j < space.dimension(); ++j) {
      if (space.total(j) >= space.n_max()) continue;
      rep.max_deviation_below_cutoff = std::max(rep.max_deviation_below_cutoff, dev.col(j).cwiseAbs().maxCoeff());
    }
  }
  const double continuum_rate =
      -std::log(single_particle_factor(model.rabi[obs], model.detuning, 1.0, model.scales));
  rep.continuum_rate_deviation = std::abs(c[obs] - continuum_rate);
  return rep;
}

AmplitudeComparison verify_amplitude(const LatticeModel& model, const FockSpace& space,
                                     const CoherentStateVector& coherent, double t, int obs, ThetaSign sign,
                                     ExpmPath path) {
  if (!(t >= 0.0)) throw std::invalid_argument("verify_amplitude: t must be >= 0");
  check_space(model, space);
  check_site(model, obs);
  if (coherent.mean_atoms() > space.n_max() / 3.0)
    throw std::invalid_argument("verify_amplitude: sum |alpha_a|^2 must stay <= n_max/3 for a safe truncation");
  const Vec& psi = coherent.state;

  AmplitudeComparison out;
  if (path == ExpmPath::Generic) {
    const Mat q = build_q_operator(model, obs, space);
    const Vec left = expm(t * q) * psi;  // (e^{tQ} psi)^dag = psi^dag e^{tQ^dag}
    const Vec right = space.annihilation(obs) * (expm(-t * q) * psi);
    out.brute_force = left.dot(right);
  } else {
    const Vec d = q_diagonal(model, obs, space);
    const Vec left = ((t * d).array().exp() * psi.array()).matrix();
    const Vec right = apply_annihilation(space, obs, ((-t * d).array().exp() * psi.array()).matrix());
    out.brute_force = left.dot(right);
  }

  const double s = sign == ThetaSign::Physical ? 1.0 : -1.0;
  Complex exponent{0.0, 0.0};
  for (std::size_t a = 0; a < model.size(); ++a) {
    const double theta =
        phase_angle(model.rabi[obs], model.rabi[a], model.kernel(obs, a), t, model.detuning, model.scales);
    exponent += std::norm(coherent.amplitudes[a]) * expm1_i(s * theta);
  }
  out.analytic = coherent.amplitudes[obs] *
                 single_particle_factor(model.rabi[obs], model.detuning, t, model.scales) * std::exp(exponent);
  return out;
}

Eigen::MatrixXcd apply_liouvillean_g(const LatticeModel& model, const FockSpace& space, const Eigen::MatrixXcd& r) {
  check_space(model, space);
  const int m = space.modes();
  const double pref = 0.75 * model.scales.gamma0() / (model.detuning * model.detuning);
  std::vector<Mat> n(static_cast<std::size_t>(m)), comm(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    n[a] = space.number(a);
    comm[a] = r * n[a] - n[a] * r;
  }
  Mat out = Mat::Zero(r.rows(), r.cols());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const Complex w = pref * std::conj(model.rabi[a]) * model.rabi[b] * model.kernel(a, b);
      if (w == Complex(0.0, 0.0)) continue;
      out += w * (comm[a] * n[b] - n[a] * comm[b]);
    }
  }
  return out;
}

DensityReport verify_density_conservation(const LatticeModel& model, const FockSpace& space) {
  check_space(model, space);
  DensityReport rep;
  for (int a = 0; a < space.modes(); ++a) {
    rep.number_deviation = std::max(rep.number_deviation, max_abs(apply_liouvillean_g(model, space, space.number(a))));
    const Mat ann = space.annihilation(a);
    const Mat lg = apply_liouvillean_g(model, space, ann);
    rep.annihilation_response = std::max(rep.annihilation_response, max_abs(lg));
    const Mat q = build_q_operator(model, a, space);
    rep.reduction_deviation = std::max(rep.reduction_deviation, max_abs(lg + (q.adjoint() * ann - ann * q)));
  }
  return rep;
}

double verify_evolution(const LatticeModel& model, const FockSpace& space, double t, int obs) {
  if (!(t >= 0.0)) throw std::invalid_argument("verify_evolution: t must be >= 0");
  check_space(model, space);
  const Mat a = space.annihilation(obs);
  Mat term = a;
  Mat sum = a;
  for (int k = 1; k < 400; ++k) {
    term = apply_liouvillean_g(model, space, term) * (-t / k);
    sum += term;
    if (max_abs(term) <= 1e-18 * std::max(1.0, max_abs(sum))) break;
  }
  const Mat q = build_q_operator(model, obs, space);
  const Mat exact = expm(t * q.adjoint()) * a * expm(-t * q);
  return max_abs(sum - exact);
}

double truncation_tail(double mean_atoms, int n_max) {
  if (!(mean_atoms >= 0.0)) throw std::invalid_argument("truncation_tail: mean must be >= 0");
  if (mean_atoms == 0.0) return 0.0;
  // sum the tail directly; 1 - head would cancel
  double term = std::exp(-mean_atoms);
  for (int k = 1; k <= n_max + 1; ++k) term *= mean_atoms / k;
  double tail = 0.0;
  for (int k = n_max + 1; k < n_max + 2000; ++k) {
    tail += term;
    term *= mean_atoms / (k + 1);
    if (term < 1e-18 * tail) break;
  }
  return tail;
}

std::vector<OracleCheck> run_oracle_suite(const OracleSettings& st, const LaserField& geometry,
                                          const DipoleOrientation& dipole, const PhysicalScales& scales) {
  if (st.sites < 1 || st.sites > 4) throw std::invalid_argument("oracle: sites must be in 1..4");
  if (st.n_max < 1 || st.n_max > 14) throw std::invalid_argument("oracle: n_max must be in 1..14");
  if (!(st.atom_number >= 0.0)) throw std::invalid_argument("oracle: atom_number must be >= 0");
  if (truncation_tail(st.atom_number, st.n_max) > 1e-10)
    throw std::invalid_argument("oracle: atom_number too large for n_max (Poisson weight above the cutoff exceeds 1e-10)");
  for (double t : st.times)
    if (!(t >= 0.0)) throw std::invalid_argument("oracle: times must be >= 0");

  const LaserField field(st.rabi_over_detuning * geometry.detuning(), geometry.detuning(), geometry.components());
  std::vector<Vec3> sites;
  for (int a = 0; a < st.sites; ++a) sites.emplace_back(0.0, 0.0, a * st.spacing / scales.k0());
  const LatticeModel model = LatticeModel::from_field(sites, 1.0, field, dipole, scales);
  const int obs = 0;
  const std::vector<Complex> amps(static_cast<std::size_t>(st.sites),
                                  Complex(std::sqrt(st.atom_number / st.sites), 0.0));

  std::vector<OracleCheck> checks;
  auto add = [&](std::string name, double dev, double thr, bool pass) {
    checks.push_back({std::move(name), dev, thr, pass});
  };

  const FockSpace space(st.sites, st.n_max);
  const bool generic_affordable = space.dimension() <= 600;
  const ExpmPath path = generic_affordable ? ExpmPath::Generic : ExpmPath::Structured;
  const CoherentStateVector coherent = CoherentStateVector::make(space, amps);
  const FockSpace doubled(st.sites, 2 * st.n_max);
  const CoherentStateVector coherent2 = CoherentStateVector::make(doubled, amps);

  // dense superoperator checks on a cutoff that keeps matrices small
  const int small_cut = affordable_cutoff(st.sites, st.n_max, 200);
  const FockSpace small(st.sites, small_cut);

  const double gmax = [&] {
    double g = 0.0;
    for (const auto& r : model.rabi) g = std::max(g, std::abs(r));
    return g;
  }();

  for (double t : st.times) {
    const CantrafoReport cr = verify_cantrafo(model, generic_affordable ? space : small, t, obs);
    add(fmt("cantrafo gamma0*t=", t), cr.max_deviation, 1e-10, cr.max_deviation < 1e-10);
  }
  {
    const CantrafoReport cr = verify_cantrafo(model, small, 0.0, obs);
    const double rate = std::abs(q_coefficients(model, obs)[obs]);
    const double rel = rate > 0.0 ? cr.continuum_rate_deviation / rate : cr.continuum_rate_deviation;
    add("cantrafo continuum rate", rel, 1e-12, rel < 1e-12);
  }

  const ThetaSign sign = st.flip_theta_sign ? ThetaSign::Flipped : ThetaSign::Physical;
  for (double t : st.times) {
    const AmplitudeComparison cmp = verify_amplitude(model, space, coherent, t, obs, sign, path);
    add(fmt("amplitude gamma0*t=", t), cmp.deviation(), 1e-8, cmp.deviation() < 1e-8);
    if (!st.flip_theta_sign && !field.has_homogeneous_phase() && gmax > 0.0 && t > 0.0) {
      const AmplitudeComparison neg = verify_amplitude(model, space, coherent, t, obs, ThetaSign::Flipped, path);
      const double ratio = cmp.deviation() > 0.0 ? neg.deviation() / cmp.deviation() : HUGE_VAL;
      const bool pass = ratio >= 1e6 || (cmp.deviation() == 0.0 && neg.deviation() > 0.0);
      add(fmt("negative control (flipped sign) gamma0*t=", t), neg.deviation(), 1e6 * cmp.deviation(), pass);
    }
    const AmplitudeComparison fine =
        verify_amplitude(model, doubled, coherent2, t, obs, sign, ExpmPath::Structured);
    const double trunc = std::abs(fine.brute_force - cmp.brute_force);
    add(fmt("truncation n_max->2n_max gamma0*t=", t), trunc, 1e-9, trunc < 1e-9);
  }

  const DensityReport dr = verify_density_conservation(model, small);
  add("density conservation L_g n_a", dr.number_deviation, 1e-12, dr.number_deviation < 1e-12);
  if (gmax > 0.0) {
    const double floor = 1e-3 * scales.gamma0();
    add("non-trivial L_g a_a", dr.annihilation_response, floor, dr.annihilation_response > floor);
  }
  add("L_g a = -L_Q a", dr.reduction_deviation, 1e-12, dr.reduction_deviation < 1e-12);
  for (double t : st.times) {
    const double dev = verify_evolution(model, small, t, obs);
    add(fmt("exp(-t L_g) a vs e^{tQ+} a e^{-tQ} gamma0*t=", t), dev, 1e-10, dev < 1e-10);
  }
  {
    const Mat q = build_q_operator(model, obs, small);
    const double herm = max_abs(q - q.adjoint());
    const bool expect_hermitian = field.has_homogeneous_phase() || gmax == 0.0;
    const bool is_hermitian = herm <= 1e-14 * std::max(1.0, max_abs(q));
    add(expect_hermitian ? "Q hermitian (homogeneous phase)" : "Q non-hermitian (running phase)", herm, 0.0,
        is_hermitian == expect_hermitian);
  }
  return checks;
}

}  // namespace decolight
