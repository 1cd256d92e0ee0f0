#pragma once

#include <Eigen/Dense>

namespace decolight {

/// Dense matrix exponential by scaling and squaring with Pade approximants
/// of degree 3..13 (Higham 2005 selection thresholds).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// True when every off-diagonal entry is exactly zero.
bool is_diagonal(const Eigen::MatrixXcd& a);

/// Elementwise exponential of the diagonal when `a` is diagonal, expm otherwise.
Eigen::MatrixXcd expm_structured(const Eigen::MatrixXcd& a);

}  // namespace decolight
