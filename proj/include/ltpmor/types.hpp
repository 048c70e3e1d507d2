#pragma once

#include <complex>

#include <Eigen/Core>

namespace ltpmor {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Eigenvalues with real part above this margin count as unstable.
inline constexpr double kStabilityMargin = 1e-10;

// Minimum pairwise pole separation, relative to the spectral radius,
// below which pole-residue formulas refuse to evaluate.
inline constexpr double kPoleClusterTol = 1e-8;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ltpmor
