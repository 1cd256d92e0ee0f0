#include "decolight/condensate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace decolight {

CondensateMode::CondensateMode(double width_, std::complex<double> alpha_, Vec3 center_)
    : width(width_), alpha(alpha_), center(std::move(center_)) {
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("CondensateMode: width must be > 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw std::invalid_argument("CondensateMode: alpha must be finite");
  if (!center.allFinite()) throw std::invalid_argument("CondensateMode: center must be finite");
}

double CondensateMode::peak() const {
  return std::pow(width, -1.5) * std::pow(std::numbers::pi, -0.75);
}

double mode_at(const CondensateMode& mode, const Vec3& x) {
  const double r2 = (x - mode.center).squaredNorm();
  return mode.peak() * std::exp(-0.5 * r2 / (mode.width * mode.width));
}

double atoms_per_n_lambda(const CondensateMode& mode, const PhysicalScales& scales) {
  const double ratio = mode.width / scales.lambda0();
  return std::pow(std::numbers::pi, 1.5) * ratio * ratio * ratio;
}

double n_lambda(const CondensateMode& mode, const PhysicalScales& scales) {
  const double p = mode.peak();
  const double l = scales.lambda0();
  return mode.atom_number() * p * p * l * l * l;
}

}  // namespace decolight
