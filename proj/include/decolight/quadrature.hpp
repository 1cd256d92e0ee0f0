#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "decolight/condensate.hpp"
#include "decolight/physics_kernel.hpp"

namespace decolight {

using Complex = std::complex<double>;

enum class QuadratureMethod { GaussHermite, Adaptive };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::GaussHermite;
  /// Points per axis for Gauss-Hermite, maximum subdivisions per axis for
  /// the adaptive rule.
  int order = 64;
  /// Target error relative to the integral's L1 scale.
  double tolerance = 1e-8;
  /// Gauss-Legendre points per panel in the axisymmetric reduction.
  int panel_nodes = 16;
  /// Use the 2D/1D reduction when the geometry is axisymmetric about z.
  bool reduce_axisymmetric = true;

  /// Throws std::invalid_argument when order < 2, tolerance <= 0 or
  /// panel_nodes < 4.
  void validate() const;

  bool operator==(const QuadratureSpec&) const = default;
};

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  /// L1 scale of the integrand (integral of |weight * f|); the tolerance is
  /// applied relative to max(|value|, scale).
  double scale = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule for the weight exp(-x^2) on the real line.
GaussRule gauss_hermite_rule(int n);
/// n-point rule on [-1, 1].
GaussRule gauss_legendre_rule(int n);

using SpatialIntegrand = std::function<Complex(const Vec3&)>;

/// Integral of |phi0(x)|^2 f(x) over all space. Gauss-Hermite substitutes
/// x = center + width * xi (tensor rule, error estimated from the order/2
/// rule); the adaptive method nests Gauss-Kronrod 7/15 over each axis.
/// Throws ConvergenceError on a missed tolerance or a non-finite f.
QuadratureResult integrate_gaussian_weighted(const SpatialIntegrand& f, const CondensateMode& mode,
                                             const QuadratureSpec& spec);

/// Single tensor Gauss-Hermite evaluation at a fixed order, no error
/// estimate and no throw on accuracy (still throws on NaN/Inf).
QuadratureResult gauss_hermite_fixed(const SpatialIntegrand& f, const CondensateMode& mode, int order);

struct ConvergenceRow {
  int order;
  Complex value;
  double delta;  // |I(order) - I(order/2)|
  bool slow;     // delta above tolerance * scale
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Smallest listed order whose delta meets the tolerance.
  std::optional<int> critical_order;
};

/// Evaluates the Gauss-Hermite integral at each of `orders` (increasing).
ConvergenceReport convergence_report(const SpatialIntegrand& f, const CondensateMode& mode,
                                     const std::vector<int>& orders, double tolerance = 1e-8);

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Stops when the summed
/// error estimate is below max(abs_tol, rel_tol * L1).
QuadratureResult adaptive_gauss_kronrod(const std::function<Complex(double)>& g, double a, double b,
                                        double rel_tol, double abs_tol, int max_subdivisions);

/// Sum of `panels` equal-width Gauss-Legendre panels on [a, b].
QuadratureResult composite_gauss_legendre(const std::function<Complex(double)>& g, double a, double b,
                                          int panels, const GaussRule& rule);

/// Observation-centred axisymmetric reduction.
///
/// With the observation point x = center + offset * z-hat and x' = x + r n,
/// n = (sin t cos p, sin t sin p, mu), the weight becomes
///   |phi0|^2 d^3x' = exp(-(r^2 + 2 r offset mu + offset^2)/w^2) r^2 dr dmu dp / (pi^{3/2} w^3).
/// `row(r)` returns the azimuth-averaged integrand as a function of mu; the
/// routine applies the weight (with the 2 pi from the azimuth) itself.
/// Points farther than 6.5 w from the centre are dropped.
/// `max_wavenumber` bounds the oscillation of the integrand in r and of
/// r*mu, and sizes the panels.
using AxisymmetricRow = std::function<Complex(double mu)>;
using AxisymmetricIntegrand = std::function<AxisymmetricRow(double r)>;

QuadratureResult integrate_axisymmetric(const AxisymmetricIntegrand& row, double offset, double width,
                                        double max_wavenumber, const QuadratureSpec& spec);

/// One-dimensional companion of the above for integrands whose mu
/// dependence has already been integrated: returns int_0^R h(r) dr with
/// R = |offset| + 6.5 w, panels sized from `max_wavenumber`. The caller
/// supplies the full radial integrand including the weight.
QuadratureResult integrate_radial(const std::function<Complex(double r)>& h, double offset, double width,
                                  double max_wavenumber, const QuadratureSpec& spec);

}  // namespace decolight
