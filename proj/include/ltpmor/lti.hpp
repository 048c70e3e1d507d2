#pragma once

#include <vector>

#include "ltpmor/types.hpp"

namespace ltpmor::lti {

/// Dense state-space system x' = Ax + Bu, y = Cx with complex-capable
/// matrices. Real systems are embedded; no descriptor term, no feedthrough.
struct LtiSystem {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix C;  // p x n

  LtiSystem() = default;
  LtiSystem(Matrix A_, Matrix B_, Matrix C_);

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }

  bool is_real(double tol = 1e-14) const;
};

/// Eigendecomposition A = X diag(values) X^{-1}, the canonical dense spectral
/// factorization here. `condition` estimates cond_F(X); large values signal a
/// (numerically) defective matrix.
struct Spectrum {
  Vector values;
  Matrix vectors;      // X, columns are right eigenvectors
  Matrix inverse;      // X^{-1}
  double condition = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  double spectral_radius() const;
  double max_real_part() const;
  /// Smallest pairwise eigenvalue distance.
  double min_pole_separation() const;
};

Spectrum eigen_decompose(const Matrix& A);

bool is_stable(const Matrix& A, double margin = kStabilityMargin);
bool is_stable(const Spectrum& spec, double margin = kStabilityMargin);

/// Throws InstabilityError unless every Re(lambda) < -margin.
void require_stable(const Matrix& A, const char* context,
                    double margin = kStabilityMargin);

/// G(s) = C (sI - A)^{-1} B via a linear solve. Throws SingularShiftError
/// when sI - A is numerically singular.
Matrix eval_transfer(const LtiSystem& sys, Complex s);

/// Transfer evaluation reusing a precomputed spectrum of A:
/// C X diag(1/(s - lambda)) X^{-1} B.
Matrix eval_transfer(const LtiSystem& sys, const Spectrum& spec, Complex s);

enum class LyapunovKind {
  // A^* X + X A + RHS = 0
  Observability,
  // A X + X A^* + RHS = 0
  Controllability,
};

/// Dense Lyapunov solve through the eigendecomposition of A. RHS must be
/// Hermitian; the result is Hermitian. Throws SpectralOverlapError when the
/// spectra of A and -A^* (nearly) intersect, NonHermitianError for a skewed
/// RHS.
Matrix solve_lyapunov(const Matrix& A, const Matrix& rhs, LyapunovKind kind);

/// One factorization of Q, reusable for every diagonal shift Q + mu I.
/// solve_block solves the (i,j) block of the Lyapunov equation whose
/// coefficient matrix is blkdiag(Q + mu_1 I, ..., Q + mu_K I):
///   observability:    (Q + mu_i I)^* X_ij + X_ij (Q + mu_j I) + R_ij = 0
///   controllability:  (Q + mu_i I) X_ij + X_ij (Q + mu_j I)^* + R_ij = 0
class ShiftedLyapunovFactor {
 public:
  explicit ShiftedLyapunovFactor(const Matrix& Q);

  Matrix solve_block(Complex mu_i, Complex mu_j, const Matrix& rhs_ij,
                     LyapunovKind kind) const;

  const Spectrum& spectrum() const { return spec_; }
  int n() const { return spec_.size(); }

 private:
  Spectrum spec_;
};

/// Sylvester kernel behind the shifted Lyapunov machinery: solves
///   (A + mu_a I) X + X (B + mu_b I)^* + RHS = 0
/// through the two given spectral factorizations.
Matrix solve_shifted_sylvester(const Spectrum& specA, Complex mu_a,
                               const Spectrum& specB, Complex mu_b,
                               const Matrix& rhs);

/// Solves the Kn x Kn Lyapunov equation with coefficient matrix
/// blkdiag(Q + shifts[0] I, ..., Q + shifts[K-1] I), factoring Q once.
/// rhs is the full Kn x Kn Hermitian right-hand side; the result equals the
/// monolithic dense solve. Blocks run in parallel and are assembled in a
/// fixed order.
Matrix solve_lyapunov_block_shifted(const Matrix& Q,
                                    const std::vector<Complex>& shifts,
                                    const Matrix& rhs, LyapunovKind kind);

/// sqrt(trace(C P C^*)) with P the controllability Gramian. Requires a
/// stable system.
double h2_norm_gramian(const LtiSystem& sys);

/// H2 inner product <G, H> from the poles and residues of H:
///   sum_k c_k^T conj(G)(-mu_k) b_k,
/// where conj(G) denotes the coefficient-conjugated system and
/// c_k b_k^T = res[H(s), mu_k]. Requires both systems stable and H with
/// well-separated simple poles.
Complex h2_inner_residue(const LtiSystem& G, const LtiSystem& H);

/// ||G - H||_H2 through the Gramian of the stacked difference realization.
double h2_error_norm(const LtiSystem& G, const LtiSystem& H);

/// Stacked realization of G - H: blkdiag(A_G, A_H), [B_G; B_H], [C_G, -C_H].
LtiSystem difference_system(const LtiSystem& G, const LtiSystem& H);

}  // namespace ltpmor::lti
