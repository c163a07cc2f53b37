#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace subjet::detail {

/// Reciprocal 1-norm condition number 1 / (|A|_1 |A^-1|_1), computed from the
/// explicit inverse. The matrices here are at most a few rows, and Eigen's
/// estimator reports 1 for some exactly singular inputs. Zero when A is
/// singular or non-finite.
inline double reciprocal_condition(const Eigen::MatrixXd& a, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  if (!a.allFinite() || a.rows() == 0) return 0.0;
  const auto u = lu.matrixLU().diagonal();
  if ((u.array() == 0.0).any()) return 0.0;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
  const double r = 1.0 / (norm * inv_norm);
  return std::isfinite(r) ? r : 0.0;
}

}  // namespace subjet::detail
