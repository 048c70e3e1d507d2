#pragma once

#include <vector>

#include "ltpmor/lti.hpp"
#include "ltpmor/types.hpp"

namespace ltpmor::ltp {

/// SISO linear time-periodic system in Floquet-Fourier form:
///   z' = Q z + b(t) u,   y = c(t)^T z,
/// with b(t) = sum_{k=-N}^{N} b_k e^{+i k w0 t} and likewise c(t). The
/// e^{+i k w0 t} convention is fixed throughout (and in the file format).
class FloquetFourierSystem {
 public:
  FloquetFourierSystem(Matrix Q, double omega0, std::vector<Vector> b_coeffs,
                       std::vector<Vector> c_coeffs);

  int dim() const { return static_cast<int>(Q_.rows()); }
  int order() const { return N_; }
  double omega0() const { return omega0_; }
  double period() const { return 2.0 * kPi / omega0_; }
  const Matrix& Q() const { return Q_; }

  /// Coefficient b_k; zero vector outside -N..N.
  Vector b(int k) const;
  Vector c(int k) const;
  const std::vector<Vector>& b_coeffs() const { return b_; }
  const std::vector<Vector>& c_coeffs() const { return c_; }

  Vector eval_b(double t) const;
  Vector eval_c(double t) const;

  /// Real Q and b_{-k} = conj(b_k), c_{-k} = conj(c_k): the system represents
  /// real-valued b(t), c(t).
  bool conjugate_symmetric(double tol = 1e-12) const;

  /// Fourier truncation to order N (coefficients dropped or zero-padded).
  FloquetFourierSystem truncated(int N) const;

 private:
  Matrix Q_;
  double omega0_;
  int N_;
  std::vector<Vector> b_;  // index k+N
  std::vector<Vector> c_;
};

/// Subsystem transfer function value
///   g_k(s) = sum_l c_{k-l}^T [(s + i l w0) I - Q]^{-1} b_l,
/// summing only index pairs where both coefficients exist. Identically zero
/// for |k| > 2N.
Complex eval_subsystem(const FloquetFourierSystem& sys, int k, Complex s);

/// Finite LTI realization of subsystem k: block diagonal shifts Q - i l w0 I
/// over the active l range, stacked b_l inputs, row of c_{k-l}^T outputs.
lti::LtiSystem subsystem_realization(const FloquetFourierSystem& sys, int k);

/// ||G||_H2 as sqrt(sum_k ||g_k||^2) with each subsystem norm from the
/// Gramian path. Requires Hurwitz Q.
double h2_norm_subsystem_sum(const FloquetFourierSystem& sys);

/// <G, H> summed over per-k LTI inner products (residue path) on the union
/// of nontrivial subsystem indices. Systems must share omega0.
Complex h2_inner_subsystem_sum(const FloquetFourierSystem& G,
                               const FloquetFourierSystem& H);

struct PoleResidueInner {
  Complex value;
  /// Magnitude of the outermost computed l-shell; estimates the series
  /// truncation remainder (zero shell for finite expansions).
  double remainder = 0.0;
};

/// Pole-residue evaluation of <G, H> for systems sharing the state matrix Q
/// (simple eigenvalues, spectral gap max|Im lambda| < w0):
///   sum_k sum_l sum_j conj(g)_k(-lambda_j^(l)) res[h_k(s), lambda_j^(l)],
/// lambda_j^(l) = lambda_j - i l w0, with the first factor taken from the
/// coefficient-conjugated system so that <G,G> is real and nonnegative.
/// The l-series is truncated at |l| <= ell_max.
PoleResidueInner h2_inner_pole_residue(const FloquetFourierSystem& G,
                                       const FloquetFourierSystem& H,
                                       int ell_max);

/// Explicit frequency-lifted embedding. Blocks are stored in ascending
/// harmonic index l = -N_e..N_e with diagonal block Q - i l w0 I carrying
/// input coefficient b_l; equivalently the block for harmonic k = -l is
/// Q + i k w0 I. C is banded block-Toeplitz with C(row k, block l) = c_{k-l}^T
/// over rows k = -2N_e..2N_e.
struct ZhouHagiwaraEmbedding {
  Matrix A;  // (2Ne+1)n x (2Ne+1)n block diagonal
  Matrix B;  // (2Ne+1)n x 1
  Matrix C;  // (4Ne+1) x (2Ne+1)n
  std::vector<Complex> shifts;  // shift of block p: -i (p - N_e) w0
  int embed_order = 0;
};

ZhouHagiwaraEmbedding assemble_zhou_hagiwara(const FloquetFourierSystem& sys,
                                             int N_e);

struct ZhouHagiwaraNorm {
  double value = 0.0;        // sqrt of the input-path trace
  double input_path = 0.0;   // trace(B^* V B), observability Gramian V
  double output_path = 0.0;  // trace(C W C^*), controllability Gramian W
  double discrepancy = 0.0;  // |input - output| / max
  int embed_order = 0;
};

/// H2 norm through the frequency-lifted Lyapunov equations, factoring Q once
/// and solving per shifted block (N_e >= N required; exact for finite
/// expansions). Reports both Gramian paths.
ZhouHagiwaraNorm h2_norm_zhou_hagiwara(const FloquetFourierSystem& sys,
                                       int N_e);

struct Harmonic {
  int k = 0;
  double frequency = 0.0;  // w + k w0
  Complex gain;            // g_k(i w)
};

/// Steady-state response ladder to u = e^{i w t}: one entry per subsystem
/// index k = -2N..2N. The response to sin(w t) follows as
/// sum_k |g_k(iw)| sin[(w + k w0) t + arg g_k(iw)].
std::vector<Harmonic> steady_state_harmonics(const FloquetFourierSystem& sys,
                                             double omega);

/// Stacked realization of G - H (same omega0): blkdiag(Q_G, Q_H) with
/// stacked b and [c_G; -c_H] coefficients.
FloquetFourierSystem difference_system(const FloquetFourierSystem& G,
                                       const FloquetFourierSystem& H);

}  // namespace ltpmor::ltp
