#pragma once

#include <complex>

#include "decolight/physics_kernel.hpp"

namespace decolight {

/// Coherent-state condensate in the isotropic Gaussian mode
///   phi0(x) = exp(-|x - c|^2 / (2 w^2)) / (w^{3/2} pi^{3/4}).
struct CondensateMode {
  CondensateMode(double width, std::complex<double> alpha, Vec3 center = Vec3::Zero());

  double width;
  std::complex<double> alpha;
  Vec3 center;

  double atom_number() const { return std::norm(alpha); }
  /// phi0 at the centre, w^{-3/2} pi^{-3/4}.
  double peak() const;
};

double mode_at(const CondensateMode& mode, const Vec3& x);

/// Atoms in a resonant-wavelength cube at the centre: |alpha phi0(c)|^2 lambda0^3.
double n_lambda(const CondensateMode& mode, const PhysicalScales& scales);

/// |alpha|^2 / N_lambda = pi^{3/2} w^3 / lambda0^3. Depends on geometry only,
/// so it stays defined for an empty condensate.
double atoms_per_n_lambda(const CondensateMode& mode, const PhysicalScales& scales);

}  // namespace decolight
