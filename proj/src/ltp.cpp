#include "ltpmor/ltp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ltpmor/errors.hpp"
#include "ltpmor/floquet.hpp"
#include "ltpmor/fourier.hpp"
#include "ltpmor/parallel.hpp"

namespace ltpmor::ltp {

namespace {

void require_same_frequency(const FloquetFourierSystem& G,
                            const FloquetFourierSystem& H) {
  double scale = std::max(G.omega0(), H.omega0());
  if (std::abs(G.omega0() - H.omega0()) > 1e-12 * scale) {
    throw FrequencyMismatchError(
        "LTP inner product: fundamental frequencies differ");
  }
}

void require_hurwitz(const FloquetFourierSystem& sys, const char* context) {
  if (!floquet::is_hurwitz(sys.Q())) {
    throw InstabilityError(std::string(context) + ": Q is not Hurwitz");
  }
}

}  // namespace

FloquetFourierSystem::FloquetFourierSystem(Matrix Q, double omega0,
                                           std::vector<Vector> b_coeffs,
                                           std::vector<Vector> c_coeffs)
    : Q_(std::move(Q)), omega0_(omega0), b_(std::move(b_coeffs)),
      c_(std::move(c_coeffs)) {
  if (Q_.rows() != Q_.cols()) {
    throw std::invalid_argument("FloquetFourierSystem: Q must be square");
  }
  if (omega0_ <= 0.0) {
    throw std::invalid_argument("FloquetFourierSystem: omega0 must be positive");
  }
  if (b_.empty() || b_.size() % 2 == 0 || b_.size() != c_.size()) {
    throw std::invalid_argument(
        "FloquetFourierSystem: coefficient lists must have matching odd length "
        "2N+1");
  }
  N_ = (static_cast<int>(b_.size()) - 1) / 2;
  for (const auto& v : b_) {
    if (v.size() != Q_.rows()) {
      throw std::invalid_argument("FloquetFourierSystem: b_k dimension mismatch");
    }
  }
  for (const auto& v : c_) {
    if (v.size() != Q_.rows()) {
      throw std::invalid_argument("FloquetFourierSystem: c_k dimension mismatch");
    }
  }
}

Vector FloquetFourierSystem::b(int k) const {
  if (std::abs(k) > N_) return Vector::Zero(dim());
  return b_[static_cast<std::size_t>(k + N_)];
}

Vector FloquetFourierSystem::c(int k) const {
  if (std::abs(k) > N_) return Vector::Zero(dim());
  return c_[static_cast<std::size_t>(k + N_)];
}

Vector FloquetFourierSystem::eval_b(double t) const {
  return fourier::evaluate_series(b_, omega0_, t);
}

Vector FloquetFourierSystem::eval_c(double t) const {
  return fourier::evaluate_series(c_, omega0_, t);
}

bool FloquetFourierSystem::conjugate_symmetric(double tol) const {
  if (Q_.imag().cwiseAbs().maxCoeff() > tol) return false;
  double scale = 0.0;
  for (const auto& v : b_) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (const auto& v : c_) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  double atol = tol * std::max(1.0, scale);
  for (int k = 0; k <= N_; ++k) {
    if ((b(-k) - b(k).conjugate()).cwiseAbs().maxCoeff() > atol) return false;
    if ((c(-k) - c(k).conjugate()).cwiseAbs().maxCoeff() > atol) return false;
  }
  return true;
}

FloquetFourierSystem FloquetFourierSystem::truncated(int N) const {
  if (N < 0) throw std::invalid_argument("truncated: negative order");
  std::vector<Vector> bt, ct;
  bt.reserve(2 * N + 1);
  ct.reserve(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    bt.push_back(b(k));
    ct.push_back(c(k));
  }
  return FloquetFourierSystem(Q_, omega0_, std::move(bt), std::move(ct));
}

Complex eval_subsystem(const FloquetFourierSystem& sys, int k, Complex s) {
  const int N = sys.order();
  if (std::abs(k) > 2 * N) return 0.0;
  const int lo = std::max(-N, k - N);
  const int hi = std::min(N, k + N);
  Complex total = 0.0;
  for (int l = lo; l <= hi; ++l) {
    Matrix shifted = -sys.Q();
    shifted.diagonal().array() += s + Complex(0.0, l * sys.omega0());
    Eigen::PartialPivLU<Matrix> lu(shifted);
    if (lu.rcond() < 1e-14) {
      throw SingularShiftError(
          "eval_subsystem: s + i l w0 coincides with an eigenvalue of Q");
    }
    total += (sys.c(k - l).transpose() * lu.solve(sys.b(l)))(0);
  }
  return total;
}

lti::LtiSystem subsystem_realization(const FloquetFourierSystem& sys, int k) {
  const int N = sys.order();
  const int n = sys.dim();
  const int lo = std::max(-N, k - N);
  const int hi = std::min(N, k + N);
  const int blocks = std::max(0, hi - lo + 1);
  if (blocks == 0) {
    throw std::invalid_argument("subsystem_realization: |k| > 2N has no blocks");
  }
  Matrix A = Matrix::Zero(blocks * n, blocks * n);
  Matrix B = Matrix::Zero(blocks * n, 1);
  Matrix C = Matrix::Zero(1, blocks * n);
  for (int l = lo; l <= hi; ++l) {
    const int p = l - lo;
    A.block(p * n, p * n, n, n) = sys.Q();
    A.block(p * n, p * n, n, n).diagonal().array() -=
        Complex(0.0, l * sys.omega0());
    B.block(p * n, 0, n, 1) = sys.b(l);
    C.block(0, p * n, 1, n) = sys.c(k - l).transpose();
  }
  return lti::LtiSystem(std::move(A), std::move(B), std::move(C));
}

double h2_norm_subsystem_sum(const FloquetFourierSystem& sys) {
  require_hurwitz(sys, "h2_norm_subsystem_sum");
  const int N = sys.order();
  std::vector<double> squares(static_cast<std::size_t>(4 * N + 1), 0.0);
  parallel_for(squares.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) - 2 * N;
    double nk = lti::h2_norm_gramian(subsystem_realization(sys, k));
    squares[idx] = nk * nk;
  });
  double total = 0.0;
  for (double sq : squares) total += sq;  // ascending k
  return std::sqrt(total);
}

Complex h2_inner_subsystem_sum(const FloquetFourierSystem& G,
                               const FloquetFourierSystem& H) {
  require_same_frequency(G, H);
  require_hurwitz(G, "h2_inner_subsystem_sum (first argument)");
  require_hurwitz(H, "h2_inner_subsystem_sum (second argument)");
  const int K = 2 * std::max(G.order(), H.order());
  std::vector<Complex> terms(static_cast<std::size_t>(2 * K + 1), Complex(0.0));
  parallel_for(terms.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) - K;
    if (std::abs(k) > 2 * G.order() || std::abs(k) > 2 * H.order()) return;
    terms[idx] = lti::h2_inner_residue(subsystem_realization(G, k),
                                       subsystem_realization(H, k));
  });
  Complex total = 0.0;
  for (const Complex& t : terms) total += t;
  return total;
}

PoleResidueInner h2_inner_pole_residue(const FloquetFourierSystem& G,
                                       const FloquetFourierSystem& H,
                                       int ell_max) {
  require_same_frequency(G, H);
  if (ell_max < 0) throw std::invalid_argument("h2_inner_pole_residue: ell_max < 0");
  const Matrix& Q = G.Q();
  double qscale = std::max(1.0, Q.norm());
  if (G.dim() != H.dim() || (Q - H.Q()).norm() > 1e-12 * qscale) {
    throw SharedStateMatrixError(
        "h2_inner_pole_residue: systems must share the state matrix Q");
  }
  require_hurwitz(G, "h2_inner_pole_residue");

  lti::Spectrum spec = lti::eigen_decompose(Q);
  const int n = spec.size();
  if (n > 1 &&
      spec.min_pole_separation() <= kPoleClusterTol * spec.spectral_radius()) {
    throw DefectiveMatrixError(
        "h2_inner_pole_residue: Q has clustered (non-simple) eigenvalues");
  }
  const double w0 = G.omega0();
  double max_im = spec.values.imag().cwiseAbs().maxCoeff();
  if (!(max_im < w0)) {
    throw SpectralGapError(
        "h2_inner_pole_residue: spectral gap violated (max |Im lambda(Q)| >= "
        "omega0)");
  }

  const int NG = G.order();
  const int NH = H.order();
  const int L = std::min(NH, ell_max);

  // P[m+N][j] = c_m^T x_j,  R[l+N][j] = (X^{-1} b_l)_j, per system.
  auto coeff_factors = [&](const FloquetFourierSystem& sys, Matrix& P,
                           Matrix& R) {
    const int N = sys.order();
    P.resize(2 * N + 1, n);
    R.resize(2 * N + 1, n);
    for (int m = -N; m <= N; ++m) {
      P.row(m + N) = sys.c(m).transpose() * spec.vectors;
      R.row(m + N) = (spec.inverse * sys.b(m)).transpose();
    }
  };
  Matrix PG, RG, PH, RH;
  coeff_factors(G, PG, RG);
  coeff_factors(H, PH, RH);

  // Coefficient-conjugated evaluation
  //   conj(g)_k(-lambda_j + i l w0)
  //     = sum_m sum_a conj(PG(k-m, a) RG(m, a))
  //       / (-lambda_j + i (l - m) w0 - conj(lambda_a)).
  auto gbar_eval = [&](int k, int l, int j) -> Complex {
    Complex total = 0.0;
    const int mlo = std::max(-NG, k - NG);
    const int mhi = std::min(NG, k + NG);
    for (int m = mlo; m <= mhi; ++m) {
      const Complex z =
          -spec.values(j) + Complex(0.0, (l - m) * w0);
      for (int a = 0; a < n; ++a) {
        Complex num = std::conj(PG(k - m + NG, a) * RG(m + NG, a));
        total += num / (z - std::conj(spec.values(a)));
      }
    }
    return total;
  };

  Complex value = 0.0;
  Complex outer_shell = 0.0;
  const int kmax = 2 * std::max(NG, NH);
  for (int k = -kmax; k <= kmax; ++k) {
    for (int l = std::max(-L, k - NH); l <= std::min(L, k + NH); ++l) {
      for (int j = 0; j < n; ++j) {
        Complex residue = PH(k - l + NH, j) * RH(l + NH, j);
        if (residue == Complex(0.0)) continue;
        Complex term = gbar_eval(k, l, j) * residue;
        value += term;
        if (std::abs(l) == L) outer_shell += term;
      }
    }
  }
  return PoleResidueInner{value, std::abs(outer_shell)};
}

ZhouHagiwaraEmbedding assemble_zhou_hagiwara(const FloquetFourierSystem& sys,
                                             int N_e) {
  const int N = sys.order();
  if (N_e < N) {
    throw std::invalid_argument(
        "assemble_zhou_hagiwara: embedding order must be >= expansion order");
  }
  const int n = sys.dim();
  const int K = 2 * N_e + 1;
  ZhouHagiwaraEmbedding emb;
  emb.embed_order = N_e;
  emb.A = Matrix::Zero(K * n, K * n);
  emb.B = Matrix::Zero(K * n, 1);
  emb.C = Matrix::Zero(4 * N_e + 1, K * n);
  emb.shifts.resize(static_cast<std::size_t>(K));
  for (int l = -N_e; l <= N_e; ++l) {
    const int p = l + N_e;
    emb.shifts[static_cast<std::size_t>(p)] = Complex(0.0, -l * sys.omega0());
    emb.A.block(p * n, p * n, n, n) = sys.Q();
    emb.A.block(p * n, p * n, n, n).diagonal().array() +=
        Complex(0.0, -l * sys.omega0());
    emb.B.block(p * n, 0, n, 1) = sys.b(l);
    for (int k = std::max(-2 * N_e, l - N); k <= std::min(2 * N_e, l + N); ++k) {
      emb.C.block(k + 2 * N_e, p * n, 1, n) = sys.c(k - l).transpose();
    }
  }
  return emb;
}

ZhouHagiwaraNorm h2_norm_zhou_hagiwara(const FloquetFourierSystem& sys,
                                       int N_e) {
  require_hurwitz(sys, "h2_norm_zhou_hagiwara");
  const int N = sys.order();
  if (N_e < N) {
    throw std::invalid_argument(
        "h2_norm_zhou_hagiwara: embedding order must be >= expansion order");
  }
  const int n = sys.dim();
  const double w0 = sys.omega0();

  // One spectral factorization of Q, shared by every shifted block.
  lti::ShiftedLyapunovFactor factor(sys.Q());
  const lti::Spectrum& spec = factor.spectrum();

  // beta_l = X^{-1} b_l, gamma_m = X^T c_m; the (i,j) Lyapunov block in the
  // eigenbasis is a rank-structured elementwise quotient, so the traces
  // trace(B^* V B) and trace(C W C^*) reduce to quadratic forms of
  // x_{l,k} = beta_l .* gamma_{k-l}.
  std::vector<Vector> beta(2 * N + 1), gamma(2 * N + 1);
  for (int m = -N; m <= N; ++m) {
    beta[m + N] = spec.inverse * sys.b(m);
    gamma[m + N] = spec.vectors.transpose() * sys.c(m);
  }
  auto x_vec = [&](int l, int k) -> Vector {
    return beta[l + N].cwiseProduct(gamma[k - l + N]);
  };

  struct Shell {
    Complex in = 0.0;
    Complex out = 0.0;
  };
  const int dmax = 2 * N;
  std::vector<Shell> shells(static_cast<std::size_t>(2 * dmax + 1));
  parallel_for(shells.size(), [&](std::size_t idx) {
    const int d = static_cast<int>(idx) - dmax;
    // Pair columns x_{i,k} with x_{i-d,k}.
    std::vector<std::pair<int, int>> cols;  // (i, k)
    for (int i = std::max(-N, d - N); i <= std::min(N, d + N); ++i) {
      const int j = i - d;
      for (int k = std::max(i, j) - N; k <= std::min(i, j) + N; ++k) {
        cols.emplace_back(i, k);
      }
    }
    if (cols.empty()) return;
    Matrix U(n, static_cast<Eigen::Index>(cols.size()));
    Matrix V(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      U.col(static_cast<Eigen::Index>(c)) = x_vec(cols[c].first, cols[c].second);
      V.col(static_cast<Eigen::Index>(c)) =
          x_vec(cols[c].first - d, cols[c].second);
    }
    Matrix Ein(n, n), Eout(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Complex base = std::conj(spec.values(a)) + spec.values(b);
        Ein(a, b) = 1.0 / (base + Complex(0.0, d * w0));
        Eout(a, b) = 1.0 / (std::conj(base) - Complex(0.0, d * w0));
      }
    }
    shells[idx].in = (U.conjugate().cwiseProduct(Ein * V)).sum();
    shells[idx].out = (U.cwiseProduct(Eout * V.conjugate())).sum();
  });

  Complex in_total = 0.0, out_total = 0.0;
  for (const Shell& s : shells) {
    in_total += s.in;
    out_total += s.out;
  }
  ZhouHagiwaraNorm result;
  result.embed_order = N_e;
  result.input_path = std::max(0.0, -in_total.real());
  result.output_path = std::max(0.0, -out_total.real());
  result.value = std::sqrt(result.input_path);
  double scale = std::max({result.input_path, result.output_path, 1e-300});
  result.discrepancy = std::abs(result.input_path - result.output_path) / scale;
  return result;
}

std::vector<Harmonic> steady_state_harmonics(const FloquetFourierSystem& sys,
                                             double omega) {
  require_hurwitz(sys, "steady_state_harmonics");
  const int N = sys.order();
  std::vector<Harmonic> out;
  out.reserve(static_cast<std::size_t>(4 * N + 1));
  for (int k = -2 * N; k <= 2 * N; ++k) {
    Harmonic h;
    h.k = k;
    h.frequency = omega + k * sys.omega0();
    h.gain = eval_subsystem(sys, k, Complex(0.0, omega));
    out.push_back(h);
  }
  return out;
}

FloquetFourierSystem difference_system(const FloquetFourierSystem& G,
                                       const FloquetFourierSystem& H) {
  require_same_frequency(G, H);
  const int nG = G.dim(), nH = H.dim();
  const int N = std::max(G.order(), H.order());
  Matrix Q = Matrix::Zero(nG + nH, nG + nH);
  Q.topLeftCorner(nG, nG) = G.Q();
  Q.bottomRightCorner(nH, nH) = H.Q();
  std::vector<Vector> b, c;
  b.reserve(2 * N + 1);
  c.reserve(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    Vector bk(nG + nH), ck(nG + nH);
    bk << G.b(k), H.b(k);
    ck << G.c(k), -H.c(k);
    b.push_back(std::move(bk));
    c.push_back(std::move(ck));
  }
  return FloquetFourierSystem(std::move(Q), G.omega0(), std::move(b),
                              std::move(c));
}

}  // namespace ltpmor::ltp
