#include "ltpmor/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ltpmor/errors.hpp"
#include "ltpmor/parallel.hpp"

namespace ltpmor::lti {

namespace {
constexpr double kEigvecConditionLimit = 1e12;
constexpr double kLyapunovResidualTol = 1e-10;

void check_hermitian(const Matrix& rhs) {
  double scale = rhs.norm();
  if (scale == 0.0) return;
  if ((rhs - rhs.adjoint()).norm() > 1e-10 * scale) {
    throw NonHermitianError("solve_lyapunov: right-hand side is not Hermitian");
  }
}

double lyapunov_residual(const Matrix& A, const Matrix& X, const Matrix& rhs,
                         LyapunovKind kind) {
  if (kind == LyapunovKind::Observability) {
    return (A.adjoint() * X + X * A + rhs).norm();
  }
  return (A * X + X * A.adjoint() + rhs).norm();
}

// Core eigenbasis solve: X such that A^*X + XA + rhs = 0 (observability) or
// AX + XA^* + rhs = 0 (controllability), given A = V diag(lam) V^{-1}.
Matrix eigenbasis_solve(const Spectrum& spec, const Matrix& rhs,
                        LyapunovKind kind) {
  const int n = spec.size();
  Matrix S(n, n);
  if (kind == LyapunovKind::Observability) {
    S = spec.vectors.adjoint() * rhs * spec.vectors;
  } else {
    S = spec.inverse * rhs * spec.inverse.adjoint();
  }
  Matrix Y(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Complex denom = (kind == LyapunovKind::Observability)
                          ? std::conj(spec.values(a)) + spec.values(b)
                          : spec.values(a) + std::conj(spec.values(b));
      if (std::abs(denom) < 1e-14 * std::max(1.0, spec.spectral_radius())) {
        throw SpectralOverlapError(
            "solve_lyapunov: spectra of A and -A^* intersect (lambda_a + "
            "conj(lambda_b) ~ 0)");
      }
      Y(a, b) = -S(a, b) / denom;
    }
  }
  if (kind == LyapunovKind::Observability) {
    return spec.inverse.adjoint() * Y * spec.inverse;
  }
  return spec.vectors * Y * spec.vectors.adjoint();
}
}  // namespace

LtiSystem::LtiSystem(Matrix A_, Matrix B_, Matrix C_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("LtiSystem: A must be square");
  }
  if (B.rows() != A.rows()) {
    throw std::invalid_argument("LtiSystem: B row count must match A");
  }
  if (C.cols() != A.rows()) {
    throw std::invalid_argument("LtiSystem: C column count must match A");
  }
}

bool LtiSystem::is_real(double tol) const {
  return A.imag().cwiseAbs().maxCoeff() <= tol &&
         (B.size() == 0 || B.imag().cwiseAbs().maxCoeff() <= tol) &&
         (C.size() == 0 || C.imag().cwiseAbs().maxCoeff() <= tol);
}

double Spectrum::spectral_radius() const {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

double Spectrum::max_real_part() const {
  return values.size() == 0 ? -std::numeric_limits<double>::infinity()
                            : values.real().maxCoeff();
}

double Spectrum::min_pole_separation() const {
  const int n = size();
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      sep = std::min(sep, std::abs(values(i) - values(j)));
    }
  }
  return sep;
}

Spectrum eigen_decompose(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("eigen_decompose: matrix must be square");
  }
  Eigen::ComplexEigenSolver<Matrix> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw DefectiveMatrixError("eigen_decompose: eigensolver did not converge");
  }
  Spectrum spec;
  spec.values = solver.eigenvalues();
  spec.vectors = solver.eigenvectors();
  Eigen::PartialPivLU<Matrix> lu(spec.vectors);
  if (lu.rcond() < 1e-15) {
    throw DefectiveMatrixError(
        "eigen_decompose: eigenvector matrix numerically singular (defective "
        "matrix)");
  }
  spec.inverse = lu.inverse();
  spec.condition = spec.vectors.norm() * spec.inverse.norm();
  return spec;
}

bool is_stable(const Matrix& A, double margin) {
  Eigen::ComplexEigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) return false;
  return solver.eigenvalues().real().maxCoeff() < -margin;
}

bool is_stable(const Spectrum& spec, double margin) {
  return spec.max_real_part() < -margin;
}

void require_stable(const Matrix& A, const char* context, double margin) {
  if (A.rows() == 0) return;
  if (!is_stable(A, margin)) {
    throw InstabilityError(std::string(context) +
                           ": state matrix is not Hurwitz (Re lambda >= -" +
                           std::to_string(margin) + ")");
  }
}

Matrix eval_transfer(const LtiSystem& sys, Complex s) {
  const int n = sys.n();
  Matrix shifted = -sys.A;
  shifted.diagonal().array() += s;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  if (lu.rcond() < 1e-14) {
    throw SingularShiftError("eval_transfer: sI - A numerically singular");
  }
  (void)n;
  return sys.C * lu.solve(sys.B);
}

Matrix eval_transfer(const LtiSystem& sys, const Spectrum& spec, Complex s) {
  Vector gains(spec.size());
  for (int j = 0; j < spec.size(); ++j) {
    Complex d = s - spec.values(j);
    if (std::abs(d) < 1e-14 * std::max(1.0, spec.spectral_radius())) {
      throw SingularShiftError("eval_transfer: s coincides with an eigenvalue");
    }
    gains(j) = 1.0 / d;
  }
  return (sys.C * spec.vectors) * gains.asDiagonal() * (spec.inverse * sys.B);
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& rhs, LyapunovKind kind) {
  if (A.rows() != A.cols() || rhs.rows() != rhs.cols() ||
      rhs.rows() != A.rows()) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  check_hermitian(rhs);
  Matrix R = 0.5 * (rhs + rhs.adjoint());
  Spectrum spec = eigen_decompose(A);

  Matrix X = eigenbasis_solve(spec, R, kind);
  X = 0.5 * (X + X.adjoint());

  // One refinement sweep in the same factorization tightens the residual on
  // non-normal A.
  double scale = R.norm();
  if (scale > 0.0) {
    Matrix resid = (kind == LyapunovKind::Observability)
                       ? (A.adjoint() * X + X * A + R).eval()
                       : (A * X + X * A.adjoint() + R).eval();
    if (resid.norm() > 1e-13 * scale) {
      X += eigenbasis_solve(spec, resid, kind);
      X = 0.5 * (X + X.adjoint());
    }
    if (lyapunov_residual(A, X, R, kind) > kLyapunovResidualTol * scale) {
      throw SpectralOverlapError(
          "solve_lyapunov: residual exceeds tolerance (ill-conditioned "
          "spectral factorization)");
    }
  }
  return X;
}

ShiftedLyapunovFactor::ShiftedLyapunovFactor(const Matrix& Q)
    : spec_(eigen_decompose(Q)) {}

Matrix ShiftedLyapunovFactor::solve_block(Complex mu_i, Complex mu_j,
                                          const Matrix& rhs_ij,
                                          LyapunovKind kind) const {
  const int n = spec_.size();
  if (rhs_ij.rows() != n || rhs_ij.cols() != n) {
    throw std::invalid_argument("solve_block: block dimension mismatch");
  }
  Matrix S(n, n);
  if (kind == LyapunovKind::Observability) {
    S = spec_.vectors.adjoint() * rhs_ij * spec_.vectors;
  } else {
    S = spec_.inverse * rhs_ij * spec_.inverse.adjoint();
  }
  Matrix Y(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Complex denom =
          (kind == LyapunovKind::Observability)
              ? std::conj(spec_.values(a) + mu_i) + spec_.values(b) + mu_j
              : spec_.values(a) + mu_i + std::conj(spec_.values(b) + mu_j);
      if (std::abs(denom) < 1e-14 * std::max(1.0, spec_.spectral_radius())) {
        throw SpectralOverlapError(
            "solve_lyapunov_block_shifted: shifted spectra intersect");
      }
      Y(a, b) = -S(a, b) / denom;
    }
  }
  if (kind == LyapunovKind::Observability) {
    return spec_.inverse.adjoint() * Y * spec_.inverse;
  }
  return spec_.vectors * Y * spec_.vectors.adjoint();
}

Matrix solve_shifted_sylvester(const Spectrum& specA, Complex mu_a,
                               const Spectrum& specB, Complex mu_b,
                               const Matrix& rhs) {
  if (rhs.rows() != specA.size() || rhs.cols() != specB.size()) {
    throw std::invalid_argument("solve_shifted_sylvester: shape mismatch");
  }
  Matrix S = specA.inverse * rhs * specB.inverse.adjoint();
  const double scale =
      std::max({1.0, specA.spectral_radius(), specB.spectral_radius()});
  for (int a = 0; a < specA.size(); ++a) {
    for (int b = 0; b < specB.size(); ++b) {
      Complex denom =
          specA.values(a) + mu_a + std::conj(specB.values(b) + mu_b);
      if (std::abs(denom) < 1e-14 * scale) {
        throw SpectralOverlapError(
            "solve_shifted_sylvester: shifted spectra intersect");
      }
      S(a, b) = -S(a, b) / denom;
    }
  }
  return specA.vectors * S * specB.vectors.adjoint();
}

Matrix solve_lyapunov_block_shifted(const Matrix& Q,
                                    const std::vector<Complex>& shifts,
                                    const Matrix& rhs, LyapunovKind kind) {
  const int n = static_cast<int>(Q.rows());
  const int K = static_cast<int>(shifts.size());
  if (K == 0) throw std::invalid_argument("block_shifted: no shifts given");
  if (rhs.rows() != static_cast<Eigen::Index>(K) * n || rhs.rows() != rhs.cols()) {
    throw std::invalid_argument("block_shifted: RHS must be Kn x Kn");
  }
  check_hermitian(rhs);

  ShiftedLyapunovFactor factor(Q);

  // Upper-triangle blocks, mirrored: X_ji = X_ij^* for Hermitian RHS.
  struct Job {
    int i, j;
  };
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(K) * (K + 1) / 2);
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j) jobs.push_back({i, j});
  }
  std::vector<Matrix> blocks(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t idx) {
    const auto [i, j] = jobs[idx];
    Matrix R = 0.5 * (rhs.block(i * n, j * n, n, n) +
                      rhs.block(j * n, i * n, n, n).adjoint());
    blocks[idx] = factor.solve_block(shifts[i], shifts[j], R, kind);
  });

  Matrix X(K * n, K * n);
  for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
    const auto [i, j] = jobs[idx];
    X.block(i * n, j * n, n, n) = blocks[idx];
    if (i != j) {
      X.block(j * n, i * n, n, n) = blocks[idx].adjoint();
    } else {
      X.block(i * n, i * n, n, n) =
          0.5 * (blocks[idx] + blocks[idx].adjoint());
    }
  }
  return X;
}

double h2_norm_gramian(const LtiSystem& sys) {
  require_stable(sys.A, "h2_norm_gramian");
  if (sys.B.size() == 0 || sys.C.size() == 0) return 0.0;
  Matrix P = solve_lyapunov(sys.A, sys.B * sys.B.adjoint(),
                            LyapunovKind::Controllability);
  double sq = (sys.C * P * sys.C.adjoint()).real().trace();
  return std::sqrt(std::max(0.0, sq));
}

Complex h2_inner_residue(const LtiSystem& G, const LtiSystem& H) {
  require_stable(G.A, "h2_inner_residue (first argument)");
  require_stable(H.A, "h2_inner_residue (second argument)");
  if (G.m() != H.m() || G.p() != H.p()) {
    throw std::invalid_argument(
        "h2_inner_residue: systems must share input/output dimensions");
  }
  Spectrum spec = eigen_decompose(H.A);
  if (spec.condition > kEigvecConditionLimit) {
    throw DefectiveMatrixError(
        "h2_inner_residue: eigenvector matrix of H is numerically rank "
        "deficient");
  }
  if (spec.size() > 1 &&
      spec.min_pole_separation() <= kPoleClusterTol * spec.spectral_radius()) {
    throw DefectiveMatrixError(
        "h2_inner_residue: poles of H are clustered below the separation "
        "tolerance");
  }

  const Matrix Cx = H.C * spec.vectors;    // p x n, columns c_j
  const Matrix XinvB = spec.inverse * H.B;  // n x m, rows b_j^T

  Complex total = 0.0;
  for (int j = 0; j < spec.size(); ++j) {
    const Complex mu = spec.values(j);
    // conj(G)(-mu) = conj(G(-conj(mu))) for the coefficient-conjugated system.
    Matrix Gbar = eval_transfer(G, -std::conj(mu)).conjugate();
    total += (Cx.col(j).transpose() * Gbar * XinvB.row(j).transpose())(0, 0);
  }
  return total;
}

LtiSystem difference_system(const LtiSystem& G, const LtiSystem& H) {
  if (G.m() != H.m() || G.p() != H.p()) {
    throw std::invalid_argument(
        "difference_system: input/output dimensions differ");
  }
  const int nG = G.n(), nH = H.n();
  Matrix A = Matrix::Zero(nG + nH, nG + nH);
  A.topLeftCorner(nG, nG) = G.A;
  A.bottomRightCorner(nH, nH) = H.A;
  Matrix B(nG + nH, G.m());
  B.topRows(nG) = G.B;
  B.bottomRows(nH) = H.B;
  Matrix C(G.p(), nG + nH);
  C.leftCols(nG) = G.C;
  C.rightCols(nH) = -H.C;
  return LtiSystem(std::move(A), std::move(B), std::move(C));
}

double h2_error_norm(const LtiSystem& G, const LtiSystem& H) {
  return h2_norm_gramian(difference_system(G, H));
}

}  // namespace ltpmor::lti
