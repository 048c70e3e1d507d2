#include <random>

#include "doctest.h"
#include "ltpmor/errors.hpp"
#include "ltpmor/lti.hpp"
#include "oracles.hpp"

using namespace ltpmor;
using lti::LtiSystem;
using lti::LyapunovKind;

namespace {

LtiSystem scalar_system(double a, double b, double c) {
  Matrix A(1, 1), B(1, 1), C(1, 1);
  A << Complex(a);
  B << Complex(b);
  C << Complex(c);
  return LtiSystem(A, B, C);
}

}  // namespace

TEST_CASE("eval_transfer on the scalar lag") {
  LtiSystem sys = scalar_system(-1.0, 1.0, 1.0);
  CHECK(lti::eval_transfer(sys, Complex(0.0))(0, 0).real() ==
        doctest::Approx(1.0));
  Complex at_i = lti::eval_transfer(sys, Complex(0.0, 1.0))(0, 0);
  CHECK(at_i.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(at_i.imag() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("eval_transfer matches the explicit-inverse oracle") {
  std::mt19937_64 rng(11);
  LtiSystem sys = oracles::random_stable_lti(rng, 3, 2, 2, false);
  const Complex s(2.0, 1.0);
  Matrix expected =
      sys.C * (s * Matrix::Identity(3, 3) - sys.A).inverse() * sys.B;
  Matrix got = lti::eval_transfer(sys, s);
  CHECK((got - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("eval_transfer rejects eigenvalue shifts") {
  LtiSystem sys = scalar_system(-1.0, 1.0, 1.0);
  CHECK_THROWS_AS((void)lti::eval_transfer(sys, Complex(-1.0)),
                  SingularShiftError);
}

TEST_CASE("eval_transfer conjugate symmetry for real systems") {
  std::mt19937_64 rng(12);
  LtiSystem sys = oracles::random_stable_lti(rng, 4, 2, 3, true);
  const Complex s(0.7, 1.3);
  Matrix a = lti::eval_transfer(sys, std::conj(s));
  Matrix b = lti::eval_transfer(sys, s).conjugate();
  CHECK((a - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("solve_lyapunov scalar and symmetry") {
  Matrix A(1, 1), R(1, 1);
  A << Complex(-1.0);
  R << Complex(1.0);
  Matrix X = lti::solve_lyapunov(A, R, LyapunovKind::Observability);
  CHECK(X(0, 0).real() == doctest::Approx(0.5));

  std::mt19937_64 rng(21);
  Matrix A4 = oracles::random_stable_matrix(rng, 4, false);
  Matrix G(4, 4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
  Matrix R4 = G * G.adjoint();
  Matrix X4 = lti::solve_lyapunov(A4, R4, LyapunovKind::Controllability);
  CHECK((X4 - X4.adjoint()).norm() <= 1e-13 * X4.norm());
}

TEST_CASE("solve_lyapunov matches the Kronecker oracle") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (bool obs : {true, false}) {
    Matrix A = oracles::random_stable_matrix(rng, 3, false);
    Matrix G(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix R = G * G.adjoint();
    Matrix X = lti::solve_lyapunov(
        A, R, obs ? LyapunovKind::Observability : LyapunovKind::Controllability);
    Matrix Xref = oracles::lyapunov_kron_oracle(A, R, obs);
    CHECK((X - Xref).norm() <= 1e-10 * Xref.norm());
  }
}

TEST_CASE("solve_lyapunov residual stays below tolerance") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    Matrix A = oracles::random_stable_matrix(rng, n, trial % 2 == 0);
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix R = G * G.adjoint();
    Matrix X = lti::solve_lyapunov(A, R, LyapunovKind::Observability);
    double resid = (A.adjoint() * X + X * A + R).norm();
    CHECK(resid <= 1e-10 * R.norm());
  }
}

TEST_CASE("solve_lyapunov error paths") {
  Matrix A(2, 2), R(2, 2);
  A << Complex(-1.0), Complex(0.0), Complex(0.0), Complex(1.0);
  R.setIdentity();
  CHECK_THROWS_AS((void)lti::solve_lyapunov(A, R, LyapunovKind::Observability),
                  SpectralOverlapError);

  Matrix A2(2, 2), Rskew(2, 2);
  A2 << Complex(-1.0), Complex(0.2), Complex(0.0), Complex(-2.0);
  Rskew << Complex(1.0), Complex(2.0), Complex(-2.0), Complex(1.0);
  CHECK_THROWS_AS(
      (void)lti::solve_lyapunov(A2, Rskew, LyapunovKind::Observability),
      NonHermitianError);
}

TEST_CASE("block-shifted Lyapunov degenerates to the plain solve") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix Q = oracles::random_stable_matrix(rng, 3, false);
  Matrix G(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
  Matrix R = G * G.adjoint();
  Matrix X1 = lti::solve_lyapunov(Q, R, LyapunovKind::Observability);
  Matrix X2 = lti::solve_lyapunov_block_shifted(Q, {Complex(0.0)}, R,
                                                LyapunovKind::Observability);
  CHECK((X1 - X2).norm() <= 1e-12 * X1.norm());
}

TEST_CASE("block-shifted Lyapunov matches the dense Kronecker oracle") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double w0 = 2.0;
  Matrix Q = oracles::random_stable_matrix(rng, 3, false);
  std::vector<Complex> shifts = {Complex(0.0, -w0), Complex(0.0),
                                 Complex(0.0, w0)};
  const int K = 3, n = 3;
  Matrix G(K * n, K * n);
  for (int i = 0; i < K * n; ++i)
    for (int j = 0; j < K * n; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
  Matrix R = G * G.adjoint();

  for (auto kind : {LyapunovKind::Observability, LyapunovKind::Controllability}) {
    Matrix X = lti::solve_lyapunov_block_shifted(Q, shifts, R, kind);
    Matrix big = Matrix::Zero(K * n, K * n);
    for (int p = 0; p < K; ++p) {
      big.block(p * n, p * n, n, n) = Q;
      big.block(p * n, p * n, n, n).diagonal().array() += shifts[p];
    }
    Matrix Xref = oracles::lyapunov_kron_oracle(
        big, R, kind == LyapunovKind::Observability);
    CHECK((X - Xref).norm() <= 1e-10 * Xref.norm());
    for (int p = 0; p < K; ++p) {
      Matrix D = X.block(p * n, p * n, n, n);
      CHECK((D - D.adjoint()).norm() <= 1e-13 * std::max(1.0, D.norm()));
    }
  }
}

TEST_CASE("h2_norm_gramian on the scalar lag and zero input") {
  CHECK(lti::h2_norm_gramian(scalar_system(-1.0, 1.0, 1.0)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lti::h2_norm_gramian(scalar_system(-1.0, 0.0, 1.0)) == 0.0);
}

TEST_CASE("h2_norm_gramian refuses unstable systems") {
  CHECK_THROWS_AS((void)lti::h2_norm_gramian(scalar_system(0.0, 1.0, 1.0)),
                  InstabilityError);
  CHECK_THROWS_AS((void)lti::h2_norm_gramian(scalar_system(1e-12, 1.0, 1.0)),
                  InstabilityError);
}

TEST_CASE("h2_norm_gramian agrees between both Gramian paths") {
  std::mt19937_64 rng(41);
  LtiSystem sys = oracles::random_stable_lti(rng, 5, 2, 3, false);
  double via_ctrl = lti::h2_norm_gramian(sys);
  Matrix Qo = lti::solve_lyapunov(sys.A, sys.C.adjoint() * sys.C,
                                  LyapunovKind::Observability);
  double via_obs = std::sqrt((sys.B.adjoint() * Qo * sys.B).real().trace());
  CHECK(via_ctrl == doctest::Approx(via_obs).epsilon(1e-10));
}

TEST_CASE("h2_norm_gramian is similarity invariant") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  LtiSystem sys = oracles::random_stable_lti(rng, 4, 1, 1, true);
  double base = lti::h2_norm_gramian(sys);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix S(4, 4);
    double cond = 1e30;
    do {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) S(i, j) = Complex(gauss(rng), 0.0);
      Eigen::JacobiSVD<Matrix> svd(S);
      cond = svd.singularValues()(0) / svd.singularValues()(3);
    } while (cond > 30.0);
    Matrix Sinv = S.inverse();
    LtiSystem xf(S * sys.A * Sinv, S * sys.B, sys.C * Sinv);
    CHECK(lti::h2_norm_gramian(xf) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("h2_inner_residue reproduces the 1/(s+1), 1/(s+2) product") {
  LtiSystem G = scalar_system(-1.0, 1.0, 1.0);
  LtiSystem H = scalar_system(-2.0, 1.0, 1.0);
  Complex inner = lti::h2_inner_residue(G, H);
  // Analytic value 1/3, confirmed by the quadrature oracle.
  CHECK(inner.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(inner.imag()) <= 1e-13);
  Complex quad = oracles::h2_inner_quadrature(G, H);
  CHECK(std::abs(inner - quad) <= 1e-8);
}

TEST_CASE("h2_inner_residue cross-checks the Gramian norm") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 8; ++trial) {
    LtiSystem sys = oracles::random_stable_lti(rng, 4, 1, 1, trial % 2 == 0);
    Complex inner = lti::h2_inner_residue(sys, sys);
    double norm = lti::h2_norm_gramian(sys);
    CHECK(std::abs(inner.real() - norm * norm) <= 1e-9 * norm * norm);
    CHECK(std::abs(inner.imag()) <= 1e-10 * norm * norm);
  }
}

TEST_CASE("h2_inner_residue on a MIMO pair against quadrature") {
  std::mt19937_64 rng(52);
  LtiSystem G = oracles::random_stable_lti(rng, 3, 2, 2, false);
  LtiSystem H = oracles::random_stable_lti(rng, 4, 2, 2, false);
  Complex inner = lti::h2_inner_residue(G, H);
  Complex quad = oracles::h2_inner_quadrature(G, H);
  CHECK(std::abs(inner - quad) <= 1e-8 * std::max(1.0, std::abs(quad)));
}

TEST_CASE("h2_inner_residue with zero input map vanishes") {
  LtiSystem G = scalar_system(-1.0, 1.0, 1.0);
  LtiSystem H = scalar_system(-2.0, 0.0, 1.0);
  CHECK(std::abs(lti::h2_inner_residue(G, H)) == 0.0);
}

TEST_CASE("h2_inner_residue refuses defective poles") {
  Matrix A(2, 2), B(2, 1), C(1, 2);
  A << Complex(-1.0), Complex(1.0), Complex(0.0), Complex(-1.0);
  B << Complex(1.0), Complex(1.0);
  C << Complex(1.0), Complex(0.0);
  LtiSystem jordan(A, B, C);
  LtiSystem G = scalar_system(-1.0, 1.0, 1.0);
  CHECK_THROWS_AS((void)lti::h2_inner_residue(G, jordan), NumericalError);
}

TEST_CASE("h2_error_norm vanishes for identical systems") {
  std::mt19937_64 rng(61);
  LtiSystem sys = oracles::random_stable_lti(rng, 3, 2, 2, true);
  double err = lti::h2_error_norm(sys, sys);
  double scale = lti::h2_norm_gramian(sys);
  CHECK(err <= 1e-7 * scale);
}
