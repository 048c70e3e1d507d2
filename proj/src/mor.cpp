#include "ltpmor/mor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "ltpmor/errors.hpp"
#include "ltpmor/floquet.hpp"
#include "ltpmor/parallel.hpp"

namespace ltpmor::mor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex mirror_stable(Complex lambda) {
  // Unstable reduced eigenvalues are reflected across the imaginary axis
  // before mirroring, so shifts always land in the open right half-plane.
  Complex sigma = lambda.real() > 0.0 ? std::conj(lambda) : -lambda;
  const double floor = 1e-12 * (1.0 + std::abs(sigma));
  if (sigma.real() < floor) sigma = Complex(floor, sigma.imag());
  return sigma;
}

struct Candidate {
  Complex shift;
  Vector bdir;  // m
  Vector cdir;  // p
};

bool shift_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_candidates(std::vector<Candidate>& cands) {
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return shift_less(a.shift, b.shift);
                   });
}

double relative_movement(const std::vector<Candidate>& prev,
                         const std::vector<Candidate>& next) {
  double worst = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    double denom = std::max(std::abs(prev[i].shift), 1e-300);
    worst = std::max(worst, std::abs(next[i].shift - prev[i].shift) / denom);
  }
  return worst;
}

Vector normalized_or_basis(Vector v, Eigen::Index fallback_dim) {
  double nrm = v.norm();
  if (nrm < 1e-300) {
    Vector e = Vector::Zero(fallback_dim);
    e(0) = 1.0;
    return e;
  }
  return v / nrm;
}

// Residue-ranked mirrored spectrum; falls back to seeded log-spaced real
// shifts when the spectral factorization is unavailable.
std::vector<Candidate> initial_candidates(const lti::LtiSystem& H, int r,
                                          bool real_mode,
                                          const lti::Spectrum* spec,
                                          std::uint64_t seed) {
  const int n = H.n();
  std::vector<Candidate> cands;
  if (spec != nullptr) {
    Matrix Cx = H.C * spec->vectors;
    Matrix XinvB = spec->inverse * H.B;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      weight[static_cast<std::size_t>(j)] =
          Cx.col(j).norm() * XinvB.row(j).norm();
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (weight[static_cast<std::size_t>(a)] !=
          weight[static_cast<std::size_t>(b)]) {
        return weight[static_cast<std::size_t>(a)] >
               weight[static_cast<std::size_t>(b)];
      }
      return shift_less(spec->values(a), spec->values(b));
    });

    auto push = [&](int j) {
      Candidate c;
      c.shift = mirror_stable(spec->values(j));
      c.bdir = normalized_or_basis(XinvB.row(j).transpose(), H.m());
      c.cdir = normalized_or_basis(Cx.col(j), H.p());
      cands.push_back(std::move(c));
    };

    if (!real_mode) {
      for (int idx = 0; idx < n && static_cast<int>(cands.size()) < r; ++idx) {
        push(order[static_cast<std::size_t>(idx)]);
      }
    } else {
      // Keep the shift set closed under conjugation.
      std::vector<bool> used(static_cast<std::size_t>(n), false);
      const double imag_tol = 1e-9 * std::max(1.0, spec->spectral_radius());
      for (int idx = 0; idx < n && static_cast<int>(cands.size()) < r; ++idx) {
        int j = order[static_cast<std::size_t>(idx)];
        if (used[static_cast<std::size_t>(j)]) continue;
        if (std::abs(spec->values(j).imag()) <= imag_tol) {
          used[static_cast<std::size_t>(j)] = true;
          push(j);
          continue;
        }
        // Find the conjugate partner.
        int partner = -1;
        double best = kInf;
        for (int i = 0; i < n; ++i) {
          if (i == j || used[static_cast<std::size_t>(i)]) continue;
          double d = std::abs(spec->values(i) - std::conj(spec->values(j)));
          if (d < best) {
            best = d;
            partner = i;
          }
        }
        if (partner < 0 || static_cast<int>(cands.size()) + 2 > r) continue;
        used[static_cast<std::size_t>(j)] = true;
        used[static_cast<std::size_t>(partner)] = true;
        push(j);
        push(partner);
      }
      // Fill any leftover slot (odd r, all-complex spectrum) with a real
      // shift at the spectral magnitude.
      while (static_cast<int>(cands.size()) < r) {
        Candidate c;
        c.shift = Complex(std::max(spec->spectral_radius(), 1.0), 0.0);
        c.bdir = normalized_or_basis(H.B.colwise().norm().transpose(), H.m());
        c.cdir = normalized_or_basis(H.C.rowwise().norm(), H.p());
        cands.push_back(std::move(c));
      }
    }
  } else {
    // Log-spaced real shifts in the magnitude range of A, seeded directions.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double hi = std::max(H.A.norm(), 1.0);
    const double lo = 1e-3 * hi;
    for (int i = 0; i < r; ++i) {
      Candidate c;
      double t = r == 1 ? 0.5 : static_cast<double>(i) / (r - 1);
      c.shift = Complex(lo * std::pow(hi / lo, t), 0.0);
      Vector b(H.m()), cc(H.p());
      for (Eigen::Index q = 0; q < b.size(); ++q) {
        b(q) = real_mode ? Complex(gauss(rng), 0.0)
                         : Complex(gauss(rng), gauss(rng));
      }
      for (Eigen::Index q = 0; q < cc.size(); ++q) {
        cc(q) = real_mode ? Complex(gauss(rng), 0.0)
                          : Complex(gauss(rng), gauss(rng));
      }
      c.bdir = normalized_or_basis(std::move(b), H.m());
      c.cdir = normalized_or_basis(std::move(cc), H.p());
      cands.push_back(std::move(c));
    }
  }
  sort_candidates(cands);
  return cands;
}

// Averages near-conjugate pairs into exact ones and realifies near-real
// shifts; keeps direction vectors consistent with the pairing.
void enforce_conjugate_closure(std::vector<Candidate>& cands) {
  const std::size_t r = cands.size();
  std::vector<bool> used(r, false);
  double scale = 1.0;
  for (const auto& c : cands) scale = std::max(scale, std::abs(c.shift));
  const double imag_tol = 1e-11 * scale;
  for (std::size_t i = 0; i < r; ++i) {
    if (used[i]) continue;
    if (std::abs(cands[i].shift.imag()) <= imag_tol) {
      cands[i].shift = Complex(cands[i].shift.real(), 0.0);
      cands[i].bdir = cands[i].bdir.real().cast<Complex>();
      cands[i].cdir = cands[i].cdir.real().cast<Complex>();
      used[i] = true;
      continue;
    }
    std::size_t partner = i;
    double best = kInf;
    for (std::size_t j = i + 1; j < r; ++j) {
      if (used[j]) continue;
      double d = std::abs(cands[j].shift - std::conj(cands[i].shift));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner == i) {
      // Unpairable complex shift in real mode: realify it.
      cands[i].shift = Complex(std::abs(cands[i].shift), 0.0);
      cands[i].bdir = cands[i].bdir.real().cast<Complex>();
      cands[i].cdir = cands[i].cdir.real().cast<Complex>();
      used[i] = true;
      continue;
    }
    Complex mu = 0.5 * (cands[i].shift + std::conj(cands[partner].shift));
    if (mu.imag() < 0) mu = std::conj(mu);
    cands[i].shift = mu;
    cands[partner].shift = std::conj(mu);
    cands[partner].bdir = cands[i].bdir.conjugate();
    cands[partner].cdir = cands[i].cdir.conjugate();
    used[i] = used[partner] = true;
  }
}

struct Bases {
  Matrix V;
  Matrix W;
};

// Tangential rational Krylov bases: V spans (sigma_i I - A)^{-1} B b_i,
// W spans (sigma_i I - A)^{-T} C^T c_i. In real mode conjugate column pairs
// are replaced by real/imaginary parts.
Bases build_bases(const lti::LtiSystem& H, const std::vector<Candidate>& cands,
                  bool real_mode) {
  const int n = H.n();
  const int r = static_cast<int>(cands.size());
  Matrix V(n, r), W(n, r);
  std::vector<bool> done(cands.size(), false);
  double scale = 1.0;
  for (const auto& c : cands) scale = std::max(scale, std::abs(c.shift));
  const double imag_tol = 1e-11 * scale;

  auto solve_pair = [&](const Candidate& c, Vector& v, Vector& w) {
    Matrix shifted = -H.A;
    shifted.diagonal().array() += c.shift;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    if (lu.rcond() < 1e-15) {
      throw SingularShiftError("irka: shifted system matrix singular");
    }
    v = lu.solve((H.B * c.bdir).eval());
    w = lu.transpose().solve((H.C.transpose() * c.cdir).eval());
  };

  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (done[i]) continue;
    Vector v, w;
    if (!real_mode || std::abs(cands[i].shift.imag()) <= imag_tol) {
      solve_pair(cands[i], v, w);
      if (real_mode) {
        v = v.real().cast<Complex>();
        w = w.real().cast<Complex>();
      }
      V.col(static_cast<Eigen::Index>(i)) = v;
      W.col(static_cast<Eigen::Index>(i)) = w;
      done[i] = true;
      continue;
    }
    // Conjugate pair: one solve provides both real columns.
    std::size_t partner = i;
    double best = kInf;
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      if (done[j]) continue;
      double d = std::abs(cands[j].shift - std::conj(cands[i].shift));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    solve_pair(cands[i], v, w);
    if (partner == i) {
      V.col(static_cast<Eigen::Index>(i)) = v.real().cast<Complex>();
      W.col(static_cast<Eigen::Index>(i)) = w.real().cast<Complex>();
      done[i] = true;
      continue;
    }
    V.col(static_cast<Eigen::Index>(i)) = v.real().cast<Complex>();
    V.col(static_cast<Eigen::Index>(partner)) = v.imag().cast<Complex>();
    W.col(static_cast<Eigen::Index>(i)) = w.real().cast<Complex>();
    W.col(static_cast<Eigen::Index>(partner)) = w.imag().cast<Complex>();
    done[i] = done[partner] = true;
  }

  for (int j = 0; j < r; ++j) {
    double vn = V.col(j).norm(), wn = W.col(j).norm();
    if (vn < 1e-300 || wn < 1e-300) {
      throw NumericalError("irka: degenerate Krylov direction");
    }
    V.col(j) /= vn;
    W.col(j) /= wn;
  }
  // Orthonormalize span-preservingly; interpolation depends only on the
  // subspaces, and well-conditioned bases keep the projected data accurate.
  Eigen::HouseholderQR<Matrix> qv(V);
  V = qv.householderQ() * Matrix::Identity(n, r);
  Eigen::HouseholderQR<Matrix> qw(W);
  W = qw.householderQ() * Matrix::Identity(n, r);
  if (real_mode) {
    V = V.real().cast<Complex>();
    W = W.real().cast<Complex>();
  }
  return {std::move(V), std::move(W)};
}

ProjectionPair biorthogonalize(Bases bases) {
  Matrix M = bases.W.transpose() * bases.V;
  Eigen::PartialPivLU<Matrix> lu(M);
  if (lu.rcond() < 1e-13) {
    throw NumericalError("irka: trial/test bases nearly rank deficient");
  }
  // W <- W M^{-T} gives W^T V = I.
  Matrix Wn = bases.W * lu.inverse().transpose();
  return ProjectionPair{std::move(bases.V), std::move(Wn)};
}

// H2 error through the residues of the reduced model:
// ||H - Hr||^2 = ||H||^2 - 2 Re<H, Hr> + ||Hr||^2.
double tracked_error(const lti::LtiSystem& H, double norm_h_sq,
                     const lti::Spectrum* hspec, const lti::LtiSystem& Hred,
                     const lti::Spectrum& redspec) {
  if (!lti::is_stable(redspec)) return kInf;
  try {
    Matrix Cx = Hred.C * redspec.vectors;
    Matrix XinvB = redspec.inverse * Hred.B;
    Complex inner = 0.0;
    for (int j = 0; j < redspec.size(); ++j) {
      Complex s = -std::conj(redspec.values(j));
      Matrix Hval = hspec != nullptr ? lti::eval_transfer(H, *hspec, s)
                                     : lti::eval_transfer(H, s);
      inner += (Cx.col(j).transpose() * Hval.conjugate() *
                XinvB.row(j).transpose())(0, 0);
    }
    double norm_red = lti::h2_norm_gramian(Hred);
    double sq = norm_h_sq - 2.0 * inner.real() + norm_red * norm_red;
    return std::sqrt(std::max(0.0, sq));
  } catch (const NumericalError&) {
    return kInf;
  }
}

}  // namespace

LiftedMimo lift_to_mimo(const ltp::FloquetFourierSystem& sys) {
  const int n = sys.dim();
  const int N = sys.order();
  Matrix B(n, 2 * N + 1);
  Matrix C(2 * N + 1, n);
  for (int k = -N; k <= N; ++k) {
    B.col(k + N) = sys.b(k);
    C.row(k + N) = sys.c(k).transpose();
  }
  LiftedMimo lifted;
  lifted.sys = lti::LtiSystem(sys.Q(), std::move(B), std::move(C));
  lifted.omega0 = sys.omega0();
  lifted.N = N;
  return lifted;
}

ltp::FloquetFourierSystem unlift_to_ltp(const lti::LtiSystem& H, double omega0) {
  if (H.m() % 2 == 0) {
    throw std::invalid_argument(
        "unlift_to_ltp: input count must be odd (2N+1 Fourier columns)");
  }
  if (H.p() != H.m()) {
    throw std::invalid_argument(
        "unlift_to_ltp: input and output counts must both equal 2N+1");
  }
  const int N = (H.m() - 1) / 2;
  std::vector<Vector> b, c;
  b.reserve(static_cast<std::size_t>(2 * N + 1));
  c.reserve(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) {
    b.push_back(H.B.col(k + N));
    c.push_back(H.C.row(k + N).transpose());
  }
  return ltp::FloquetFourierSystem(H.A, omega0, std::move(b), std::move(c));
}

double ProjectionPair::biorthogonality_defect() const {
  Matrix M = W.transpose() * V;
  M.diagonal().array() -= 1.0;
  return M.cwiseAbs().maxCoeff();
}

lti::LtiSystem project(const lti::LtiSystem& sys, const ProjectionPair& pair) {
  return lti::LtiSystem(pair.W.transpose() * sys.A * pair.V,
                        pair.W.transpose() * sys.B, sys.C * pair.V);
}

IrkaResult irka(const lti::LtiSystem& H, int r, const IrkaOptions& opts) {
  const int n = H.n();
  if (r < 1 || r > n) {
    throw std::invalid_argument("irka: need 1 <= r <= n");
  }
  lti::require_stable(H.A, "irka");
  const bool real_mode = H.is_real();

  const lti::Spectrum* hspec_ptr = nullptr;
  lti::Spectrum hspec;
  try {
    hspec = lti::eigen_decompose(H.A);
    hspec_ptr = &hspec;
  } catch (const NumericalError&) {
    hspec_ptr = nullptr;
  }
  // Use the cached factorization for transfer evaluations only when it
  // reproduces the LU route.
  const lti::Spectrum* eval_spec = nullptr;
  if (hspec_ptr != nullptr) {
    Complex probe(0.731 * std::max(1.0, hspec.spectral_radius()),
                  0.389 * std::max(1.0, hspec.spectral_radius()));
    Matrix lu_val = lti::eval_transfer(H, probe);
    Matrix sp_val = lti::eval_transfer(H, hspec, probe);
    if ((lu_val - sp_val).norm() <= 1e-9 * std::max(1.0, lu_val.norm())) {
      eval_spec = hspec_ptr;
    }
  }

  const double norm_h = lti::h2_norm_gramian(H);
  const double norm_h_sq = norm_h * norm_h;

  std::vector<Candidate> cands =
      initial_candidates(H, r, real_mode, hspec_ptr, opts.seed);
  if (real_mode) enforce_conjugate_closure(cands);

  IrkaResult best;
  double best_error = kInf;
  bool have_best = false;
  IrkaDiagnostics diag;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Bases bases = build_bases(H, cands, real_mode);
    ProjectionPair pair = biorthogonalize(std::move(bases));
    lti::LtiSystem Hred = project(H, pair);
    lti::Spectrum redspec = lti::eigen_decompose(Hred.A);

    std::vector<Candidate> next(static_cast<std::size_t>(r));
    Matrix Cx = Hred.C * redspec.vectors;
    Matrix XinvB = redspec.inverse * Hred.B;
    for (int j = 0; j < r; ++j) {
      next[static_cast<std::size_t>(j)].shift = mirror_stable(redspec.values(j));
      next[static_cast<std::size_t>(j)].bdir =
          normalized_or_basis(XinvB.row(j).transpose(), H.m());
      next[static_cast<std::size_t>(j)].cdir =
          normalized_or_basis(Cx.col(j), H.p());
    }
    if (real_mode) enforce_conjugate_closure(next);
    sort_candidates(next);

    diag.iterations = iter;
    diag.shift_movement = relative_movement(cands, next);

    const bool stable = lti::is_stable(redspec);
    double err = kInf;
    if (opts.track_error) {
      err = tracked_error(H, norm_h_sq, eval_spec, Hred, redspec);
    } else if (stable) {
      err = 0.0;  // placeholder: stability is the only selection criterion
    }
    if (iter == 1 && opts.track_error) diag.initial_error = err;
    if (stable && err < best_error) {
      best_error = err;
      best.reduced = Hred;
      best.projection = pair;
      have_best = true;
    }

    if (diag.shift_movement <= opts.tol) {
      diag.converged = true;
      if (stable) {
        // The converged iterate carries the Hermite interpolation property at
        // its own mirrored poles.
        double final_err =
            opts.track_error
                ? tracked_error(H, norm_h_sq, eval_spec, Hred, redspec)
                : 0.0;
        if (opts.track_error && diag.initial_error > 0.0 &&
            final_err > diag.initial_error * (1.0 + 1e-12)) {
          // Converged to a worse fixed point than the first iterate; report
          // the best iterate instead and mark the run unconverged.
          diag.converged = false;
          break;
        }
        diag.final_error = final_err;
        return IrkaResult{std::move(Hred), std::move(pair), diag};
      }
      diag.converged = false;
      break;
    }
    cands = std::move(next);
  }

  if (!have_best) {
    throw ConvergenceError(
        "irka: no stable reduced iterate found within the iteration budget");
  }
  diag.converged = false;
  diag.final_error = best_error;
  best.diagnostics = diag;
  return best;
}

ProjectionPair pod_reduce(const Matrix& snapshots, int r) {
  if (r < 1) throw std::invalid_argument("pod_reduce: r must be positive");
  if (snapshots.size() == 0) {
    throw std::invalid_argument("pod_reduce: empty snapshot matrix");
  }
  if (snapshots.imag().cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, snapshots.real().cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("pod_reduce: snapshots must be real-valued");
  }
  RealMatrix X = snapshots.real();
  if (r > std::min(X.rows(), X.cols())) {
    throw RankDeficiencyError("pod_reduce: r exceeds the snapshot rank bound");
  }
  Eigen::BDCSVD<RealMatrix> svd(X, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(r - 1) / sv(0) < 1e-13) {
    throw RankDeficiencyError(
        "pod_reduce: snapshot matrix numerically rank deficient at order r");
  }
  Matrix V = svd.matrixU().leftCols(r).cast<Complex>();
  return ProjectionPair{V, V};
}

ProjectionPair balanced_truncation(const lti::LtiSystem& H, int r) {
  const int n = H.n();
  if (r < 1 || r > n) {
    throw std::invalid_argument("balanced_truncation: need 1 <= r <= n");
  }
  lti::require_stable(H.A, "balanced_truncation");
  Matrix P = lti::solve_lyapunov(H.A, H.B * H.B.adjoint(),
                                 lti::LyapunovKind::Controllability);
  Matrix Q = lti::solve_lyapunov(H.A, H.C.adjoint() * H.C,
                                 lti::LyapunovKind::Observability);

  auto hermitian_sqrt = [](const Matrix& M) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    return (es.eigenvectors() * d.asDiagonal() *
            es.eigenvectors().adjoint())
        .eval();
  };
  Matrix Rp = hermitian_sqrt(P);
  Matrix Rq = hermitian_sqrt(Q);

  Eigen::BDCSVD<Matrix> svd(Rq.adjoint() * Rp,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& hsv = svd.singularValues();
  if (hsv(0) <= 0.0 || hsv(r - 1) / hsv(0) < 1e-13) {
    throw RankDeficiencyError(
        "balanced_truncation: Hankel singular values vanish at order r");
  }
  Vector scale =
      hsv.head(r).cwiseSqrt().cwiseInverse().cast<Complex>();
  Matrix V = Rp * svd.matrixV().leftCols(r) * scale.asDiagonal();
  Matrix Wstar = Rq * svd.matrixU().leftCols(r) * scale.asDiagonal();
  // Stored with the transpose convention: W^T V = (W*)^H V = I.
  return ProjectionPair{std::move(V), Wstar.conjugate()};
}

namespace {

// Unitary input/output mixing that turns a conjugate-symmetric lift into a
// real MIMO system with the same H2 geometry: column k=0 stays, pairs
// (-k, k) become sqrt(2) Re b_k and sqrt(2) Im b_k.
lti::LtiSystem realify_lift(const LiftedMimo& lifted) {
  const int N = lifted.N;
  const int n = lifted.sys.n();
  const double s2 = std::sqrt(2.0);
  Matrix B(n, 2 * N + 1);
  Matrix C(2 * N + 1, n);
  B.col(0) = lifted.sys.B.col(N).real().cast<Complex>();
  C.row(0) = lifted.sys.C.row(N).real().cast<Complex>();
  for (int k = 1; k <= N; ++k) {
    B.col(2 * k - 1) = s2 * lifted.sys.B.col(N + k).real().cast<Complex>();
    B.col(2 * k) = s2 * lifted.sys.B.col(N + k).imag().cast<Complex>();
    C.row(2 * k - 1) = s2 * lifted.sys.C.row(N + k).real().cast<Complex>();
    C.row(2 * k) = s2 * lifted.sys.C.row(N + k).imag().cast<Complex>();
  }
  return lti::LtiSystem(lifted.sys.A.real().cast<Complex>(), std::move(B),
                        std::move(C));
}

}  // namespace

double projected_error_h2(const lti::LtiSystem& full, const Matrix& V,
                          const lti::LtiSystem& reduced) {
  const int n = full.n();
  const int r = reduced.n();
  if (V.rows() != n || V.cols() != r) {
    throw std::invalid_argument("projected_error_h2: V shape mismatch");
  }
  lti::require_stable(full.A, "projected_error_h2 (full)");
  lti::require_stable(reduced.A, "projected_error_h2 (reduced)");
  lti::Spectrum specA = lti::eigen_decompose(full.A);
  lti::Spectrum specR = lti::eigen_decompose(reduced.A);
  Matrix E = full.A * V - V * reduced.A;
  Matrix EB = full.B - V * reduced.B;
  // Controllability Gramian of the error cascade, block by block; only the
  // (1,1) block enters the output trace.
  Matrix P22 = lti::solve_shifted_sylvester(specR, 0.0, specR, 0.0,
                                            reduced.B * reduced.B.adjoint());
  Matrix P12 = lti::solve_shifted_sylvester(
      specA, 0.0, specR, 0.0, E * P22 + EB * reduced.B.adjoint());
  Matrix R11 = E * P12.adjoint() + P12 * E.adjoint() + EB * EB.adjoint();
  Matrix P11 =
      lti::solve_shifted_sylvester(specA, 0.0, specA, 0.0,
                                   0.5 * (R11 + R11.adjoint()));
  double sq = (full.C * P11 * full.C.adjoint()).real().trace();
  return std::sqrt(std::max(0.0, sq));
}

double projected_error_ltp_h2(const ltp::FloquetFourierSystem& full,
                              const Matrix& V,
                              const ltp::FloquetFourierSystem& reduced) {
  const int n = full.dim();
  const int r = reduced.dim();
  if (V.rows() != n || V.cols() != r) {
    throw std::invalid_argument("projected_error_ltp_h2: V shape mismatch");
  }
  if (std::abs(full.omega0() - reduced.omega0()) >
      1e-12 * std::max(full.omega0(), reduced.omega0())) {
    throw FrequencyMismatchError(
        "projected_error_ltp_h2: fundamental frequencies differ");
  }
  if (!floquet::is_hurwitz(full.Q()) || !floquet::is_hurwitz(reduced.Q())) {
    throw InstabilityError("projected_error_ltp_h2: state matrix not Hurwitz");
  }
  const double w0 = full.omega0();
  const int N = std::max(full.order(), reduced.order());
  lti::Spectrum specQ = lti::eigen_decompose(full.Q());
  lti::Spectrum specR = lti::eigen_decompose(reduced.Q());
  Matrix E = full.Q() * V - V * reduced.Q();

  std::vector<Vector> eb(static_cast<std::size_t>(2 * N + 1));
  for (int l = -N; l <= N; ++l) {
    eb[static_cast<std::size_t>(l + N)] = full.b(l) - V * reduced.b(l);
  }
  auto mu = [&](int l) { return Complex(0.0, -l * w0); };

  // trace(C W C^*) over the harmonic ladder; the output map only touches the
  // full-state rows, so per harmonic pair (i,j) only the cascade's W11 block
  // is sandwiched.
  const int K = 2 * N + 1;
  std::vector<Complex> partial(static_cast<std::size_t>(K * K), Complex(0.0));
  parallel_for(partial.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / K - N;
    const int j = static_cast<int>(idx) % K - N;
    const Vector& bi = reduced.b(i);
    const Vector& bj = reduced.b(j);
    const Vector& ei = eb[static_cast<std::size_t>(i + N)];
    const Vector& ej = eb[static_cast<std::size_t>(j + N)];
    Matrix W22 = lti::solve_shifted_sylvester(specR, mu(i), specR, mu(j),
                                              bi * bj.adjoint());
    Matrix W21 = lti::solve_shifted_sylvester(
        specR, mu(i), specQ, mu(j), W22 * E.adjoint() + bi * ej.adjoint());
    Matrix W12 = lti::solve_shifted_sylvester(specQ, mu(i), specR, mu(j),
                                              E * W22 + ei * bj.adjoint());
    Matrix W11 = lti::solve_shifted_sylvester(
        specQ, mu(i), specQ, mu(j),
        E * W21 + W12 * E.adjoint() + ei * ej.adjoint());
    Complex sum = 0.0;
    for (int k = std::max(i, j) - N; k <= std::min(i, j) + N; ++k) {
      sum += (full.c(k - i).transpose() * W11 * full.c(k - j).conjugate())(0);
    }
    partial[idx] = sum;
  });
  Complex total = 0.0;
  for (const Complex& p : partial) total += p;
  return std::sqrt(std::max(0.0, total.real()));
}

ReductionResult reduce_ltp_algorithm1(const ltp::FloquetFourierSystem& sys,
                                      const ReductionOptions& opts) {
  const int n = sys.dim();
  if (opts.r < 1 || opts.r > n) {
    throw std::invalid_argument("reduce_ltp_algorithm1: need 1 <= r <= n");
  }
  const int N = opts.N < 0 ? sys.order() : opts.N;
  if (!floquet::is_hurwitz(sys.Q())) {
    throw InstabilityError("reduce_ltp_algorithm1: Q is not Hurwitz");
  }

  // Step 1: Fourier truncation. Step 2: MIMO companion.
  ltp::FloquetFourierSystem G_N = sys.truncated(N);
  LiftedMimo lifted = lift_to_mimo(G_N);
  const bool conj_sym = G_N.conjugate_symmetric();

  // Step 3: projection bases from the selected backend.
  ProjectionPair pair;
  IrkaDiagnostics irka_diag;
  if (opts.method == "irka") {
    lti::LtiSystem work =
        conj_sym ? realify_lift(lifted) : lifted.sys;
    IrkaResult res = irka(work, opts.r, opts.irka);
    pair = std::move(res.projection);
    irka_diag = res.diagnostics;
  } else if (opts.method == "bt") {
    lti::LtiSystem work = conj_sym ? realify_lift(lifted) : lifted.sys;
    pair = balanced_truncation(work, opts.r);
  } else if (opts.method == "pod") {
    sim::SimulateOptions sim_opts;
    sim_opts.dt = opts.pod_dt > 0.0 ? opts.pod_dt : sys.period() / 100.0;
    sim_opts.t_final = opts.pod_t_final > 0.0 ? opts.pod_t_final : sys.period();
    sim_opts.record_states = true;
    sim::SimulationTrace trace =
        sim::simulate_backward_euler(G_N, opts.pod_signal, sim_opts);
    // Snapshot matrix x_{t_1}..x_{t_m} (initial zero state dropped).
    Matrix snapshots = trace.states.rightCols(trace.states.cols() - 1);
    pair = pod_reduce(snapshots, opts.r);
  } else {
    throw std::invalid_argument("reduce_ltp_algorithm1: unknown method '" +
                                opts.method + "'");
  }

  // Step 4: project the lift and unlift the reduced coefficients.
  lti::LtiSystem reduced_mimo = project(lifted.sys, pair);
  ltp::FloquetFourierSystem reduced = unlift_to_ltp(reduced_mimo, sys.omega0());

  ReductionReport report;
  report.r = opts.r;
  report.N = N;
  report.method = opts.method;
  report.irka = irka_diag;
  report.reduced_stable = lti::is_stable(reduced_mimo.A);

  if (report.reduced_stable) {
    report.mimo_error = projected_error_h2(lifted.sys, pair.V, reduced_mimo);
    report.bound = std::sqrt(2.0 * N + 1.0) * report.mimo_error;
    if (opts.compute_ltp_error) {
      report.ltp_error = projected_error_ltp_h2(G_N, pair.V, reduced);
    }
  } else {
    report.mimo_error = kInf;
    report.bound = kInf;
    if (opts.compute_ltp_error) report.ltp_error = kInf;
  }

  return ReductionResult{std::move(reduced), std::move(reduced_mimo),
                         std::move(pair), std::move(report)};
}

ErrorBoundReport error_bound_report(const ltp::FloquetFourierSystem& full,
                                    const ltp::FloquetFourierSystem& reduced,
                                    int N) {
  if (std::abs(full.omega0() - reduced.omega0()) >
      1e-12 * std::max(full.omega0(), reduced.omega0())) {
    throw FrequencyMismatchError(
        "error_bound_report: fundamental frequencies differ");
  }
  ErrorBoundReport out;
  ltp::FloquetFourierSystem full_N = full.truncated(N);
  if (full.order() > N) {
    out.truncation_term_computed = true;
    out.truncation_term =
        ltp::h2_norm_zhou_hagiwara(ltp::difference_system(full, full_N),
                                   full.order())
            .value;
  }
  lti::LtiSystem H_N = lift_to_mimo(full_N).sys;
  lti::LtiSystem H_red = lift_to_mimo(reduced.truncated(N)).sys;
  out.projection_term =
      std::sqrt(2.0 * N + 1.0) * lti::h2_error_norm(H_N, H_red);
  out.total = out.truncation_term + out.projection_term;
  return out;
}

}  // namespace ltpmor::mor
