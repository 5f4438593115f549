#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace ddcorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cyclic frequency in MHz -> angular frequency in rad/us.
inline constexpr double mhz_to_angular(double f_mhz) { return kTwoPi * f_mhz; }
// Cyclic frequency in kHz -> angular frequency in rad/us.
inline constexpr double khz_to_angular(double f_khz) { return kTwoPi * f_khz / 1000.0; }

inline double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// max-norm of U^dagger U - I
inline double unitarity_error(const CMatrix& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace ddcorr
