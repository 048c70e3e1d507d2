#include <cmath>
#include <random>

#include "doctest.h"
#include "ltpmor/errors.hpp"
#include "ltpmor/floquet.hpp"
#include "ltpmor/mor.hpp"
#include "ltpmor/sim.hpp"
#include "oracles.hpp"

using namespace ltpmor;
using sim::InputSignal;
using sim::SimulateOptions;

TEST_CASE("zero input gives an identically zero trace") {
  Matrix A(1, 1), B(1, 1), C(1, 1);
  A << Complex(-1.0);
  B << Complex(1.0);
  C << Complex(1.0);
  lti::LtiSystem sys(A, B, C);
  SimulateOptions opts{1e-2, 2.0, false};
  auto trace = sim::simulate_backward_euler(sys, InputSignal::step(0.0), opts);
  for (double y : trace.outputs) CHECK(y == 0.0);
  for (double u : trace.inputs) CHECK(u == 0.0);
}

TEST_CASE("step response of the scalar lag tracks 1 - e^{-t}") {
  Matrix A(1, 1), B(1, 1), C(1, 1);
  A << Complex(-1.0);
  B << Complex(1.0);
  C << Complex(1.0);
  lti::LtiSystem sys(A, B, C);
  SimulateOptions opts{1e-3, 5.0, false};
  auto trace = sim::simulate_backward_euler(sys, InputSignal::step(), opts);
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    worst = std::max(worst, std::abs(trace.outputs[k] -
                                     (1.0 - std::exp(-trace.times[k]))));
  }
  CHECK(worst <= 2e-3);
}

TEST_CASE("backward Euler converges at first order") {
  std::mt19937_64 rng(401);
  auto sys = oracles::random_stable_lti(rng, 3, 1, 1, true);
  auto max_err = [&](double dt, const sim::SimulationTrace& ref, double ref_dt) {
    SimulateOptions opts{dt, 2.0, false};
    auto tr = sim::simulate_backward_euler(sys, InputSignal::step(), opts);
    const std::size_t stride = static_cast<std::size_t>(std::llround(dt / ref_dt));
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.outputs.size(); ++k) {
      worst = std::max(worst,
                       std::abs(tr.outputs[k] - ref.outputs[k * stride]));
    }
    return worst;
  };
  const double ref_dt = 1e-2 / 16.0;
  SimulateOptions ref_opts{ref_dt, 2.0, false};
  auto ref = sim::simulate_backward_euler(sys, InputSignal::step(), ref_opts);
  double e1 = max_err(1e-2, ref, ref_dt);
  double e2 = max_err(5e-3, ref, ref_dt);
  double ratio = e1 / e2;
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
}

TEST_CASE("signals evaluate as declared") {
  CHECK(InputSignal::pulse(1e-3)(0.5e-3, 0) == 1.0);
  CHECK(InputSignal::pulse(1e-3)(2e-3, 0) == 0.0);
  CHECK(InputSignal::sinusoid(2.0, 0.5, 3.0)(0.7, 0) ==
        doctest::Approx(3.0 * std::sin(2.0 * 0.7 + 0.5)));
  InputSignal sampled = InputSignal::sampled({0.0, 1.5, -2.0});
  CHECK(sampled(123.0, 2) == -2.0);
  CHECK_THROWS_AS((void)sampled(0.0, 3), std::invalid_argument);
}

TEST_CASE("LTP simulation uses the Fourier coefficients on the grid") {
  // d z/dt = -z + cos(t) u with u = 1: steady state (cos t + sin t)/2.
  Matrix Q(1, 1);
  Q << Complex(-1.0);
  std::vector<Vector> b(3, Vector::Zero(1)), c(3, Vector::Zero(1));
  b[0](0) = 0.5;
  b[2](0) = 0.5;
  c[1](0) = 1.0;
  ltp::FloquetFourierSystem sys(Q, 1.0, b, c);
  SimulateOptions opts{1e-3, 30.0, false};
  auto trace = sim::simulate_backward_euler(sys, InputSignal::step(), opts);
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    if (trace.times[k] < 15.0) continue;  // transient
    const double t = trace.times[k];
    worst = std::max(worst, std::abs(trace.outputs[k] -
                                     0.5 * (std::cos(t) + std::sin(t))));
  }
  CHECK(worst <= 5e-3);
}

TEST_CASE("state recording matches the output equation") {
  std::mt19937_64 rng(402);
  auto sys = oracles::random_stable_lti(rng, 3, 1, 1, true);
  SimulateOptions opts{1e-2, 1.0, true};
  auto trace = sim::simulate_backward_euler(sys, InputSignal::step(), opts);
  REQUIRE(trace.states.cols() == static_cast<Eigen::Index>(trace.times.size()));
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    Complex y = (sys.C * trace.states.col(k))(0);
    CHECK(std::abs(y.real() - trace.outputs[k]) <= 1e-12);
  }
}

TEST_CASE("heat benchmark discretization") {
  auto bench = sim::build_heat_benchmark(100, 32);
  const int n = 100;
  const double h = 1.0 / 101.0;

  CHECK((bench.A - bench.A.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(bench.A);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
  // Dirichlet Laplacian spectrum -(2/h^2)(1 - cos(j pi h)).
  RealVector expected(n);
  for (int j = 1; j <= n; ++j) {
    expected(j - 1) = -(2.0 / (h * h)) * (1.0 - std::cos(j * kPi * h));
  }
  std::sort(expected.data(), expected.data() + n);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(es.eigenvalues()(j) - expected(j)) <=
          1e-10 * std::abs(expected(j)));
  }

  // Source node sequence: periodic by construction, centered at x = 0.5,
  // swinging +-0.4.
  CHECK(bench.source_nodes.size() == 32);
  CHECK(bench.source_nodes[0] == static_cast<int>(std::lround(0.5 / h)));
  // xi has period T/4; the node sequence repeats every 8 samples except where
  // xi/h sits on a rounding tie (xi = 0.5 is exactly half-integer here).
  for (int j = 0; j < 32; ++j) {
    const double t = 100.0 * j / 32.0;
    const double pos = (0.5 + 0.4 * std::sin(8.0 * kPi * t / 100.0)) / h;
    if (std::abs(pos - std::floor(pos) - 0.5) < 1e-9) continue;
    CHECK(bench.source_nodes[static_cast<std::size_t>(j)] ==
          bench.source_nodes[static_cast<std::size_t>((j + 8) % 32)]);
  }
  int lo = 1000, hi = -1000;
  for (int node : bench.source_nodes) {
    lo = std::min(lo, node);
    hi = std::max(hi, node);
  }
  CHECK(lo == static_cast<int>(std::lround(0.1 / h)));
  CHECK(hi == static_cast<int>(std::lround(0.9 / h)));

  // Output picks the midpoint node.
  CHECK(bench.c.sum() == 1.0);
  CHECK(bench.c(static_cast<int>(std::lround(0.5 / h)) - 1) == 1.0);

  // Fourier model: conjugate-symmetric coefficients, source at 1/h scale.
  CHECK(bench.system.conjugate_symmetric(1e-10));
  CHECK(bench.system.order() == 15);
  Vector b0 = bench.system.eval_b(0.0);
  CHECK(b0.cwiseAbs().maxCoeff() > 10.0);  // 1/h = 101 spread over harmonics
}

TEST_CASE("heat benchmark split-source option conserves the 1/h mass") {
  auto bench = sim::build_heat_benchmark(50, 16, true);
  const double h = 1.0 / 51.0;
  for (const auto& b : bench.b_samples) {
    CHECK(b.sum() == doctest::Approx(1.0 / h).epsilon(1e-12));
  }
}

TEST_CASE("modulated benchmark splits cosines into five coefficients") {
  auto base = sim::make_structural_base(10, 7);
  const double w0 = 0.9;
  auto sys = sim::build_modulated_benchmark(base, w0);
  CHECK(sys.order() == 2);
  CHECK(sys.dim() == 20);
  int nontrivial = 0;
  for (int k = -2; k <= 2; ++k) {
    if (sys.b(k).norm() > 0.0) ++nontrivial;
  }
  CHECK(nontrivial == 5);

  // Resynthesized b(t) equals b0 + b1 cos(w0 t) + b2 cos(2 w0 t).
  for (int j = 0; j < 64; ++j) {
    const double t = sys.period() * j / 64.0;
    Vector expect = base.B.col(0) + base.B.col(1) * std::cos(w0 * t) +
                    base.B.col(2) * std::cos(2.0 * w0 * t);
    CHECK((sys.eval_b(t) - expect).cwiseAbs().maxCoeff() <=
          1e-13 * expect.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("modulated benchmark degenerates to LTI when b1 = b2 = 0") {
  auto base = sim::make_structural_base(6, 11);
  Matrix B = base.B;
  B.col(1).setZero();
  B.col(2).setZero();
  Matrix C = base.C;
  C.row(1).setZero();
  C.row(2).setZero();
  lti::LtiSystem degenerate(base.A, B, C);
  auto sys = sim::build_modulated_benchmark(degenerate, 1.1);
  lti::LtiSystem siso(base.A, B.col(0), C.row(0));
  CHECK(ltp::h2_norm_subsystem_sum(sys) ==
        doctest::Approx(lti::h2_norm_gramian(siso)).epsilon(1e-12));
}

TEST_CASE("modulated benchmark rejects wrong port counts") {
  std::mt19937_64 rng(403);
  auto bad = oracles::random_stable_lti(rng, 4, 2, 3, true);
  CHECK_THROWS_AS((void)sim::build_modulated_benchmark(bad, 1.0),
                  std::invalid_argument);
}

TEST_CASE("synthetic transmission ladder is Hurwitz and conjugate symmetric") {
  auto sys = sim::make_synthetic_transmission_ltp(20, 4, 5);
  CHECK(floquet::is_hurwitz(sys.Q()));
  CHECK(sys.conjugate_symmetric(1e-12));
  CHECK(sys.omega0() == doctest::Approx(2.0 * kPi * 60.0));
}

TEST_CASE("an r = n reduction reproduces the simulated trace") {
  std::mt19937_64 rng(404);
  auto sys = oracles::random_ff_system(rng, 4, 1, 1.0, true, true);
  mor::ReductionOptions ropts;
  ropts.r = 4;
  auto result = mor::reduce_ltp_algorithm1(sys, ropts);
  SimulateOptions opts{1e-2, 10.0, false};
  auto full = sim::simulate_backward_euler(sys, InputSignal::sinusoid(0.7), opts);
  auto red =
      sim::simulate_backward_euler(result.reduced, InputSignal::sinusoid(0.7), opts);
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < full.outputs.size(); ++k) {
    worst = std::max(worst, std::abs(full.outputs[k] - red.outputs[k]));
    scale = std::max(scale, std::abs(full.outputs[k]));
  }
  CHECK(worst <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("forced response concentrates on the harmonic ladder") {
  // Quasi-periodicity of the steady state: DFT bins off the w + k w0 comb
  // stay below 1% of the total energy.
  Matrix Q(1, 1);
  Q << Complex(-1.0);
  std::vector<Vector> b(3, Vector::Zero(1)), c(3, Vector::Zero(1));
  b[0](0) = 0.5;
  b[2](0) = 0.5;
  c[1](0) = 1.0;
  ltp::FloquetFourierSystem sys(Q, 1.0, b, c);  // omega0 = 1, T = 2 pi

  const int periods = 8;
  const int samples_per_period = 512;
  const double T = sys.period();
  const double dt = T / samples_per_period;
  const double omega = 33.0 / (periods * 1.0) * 1.0;  // bin 33 over 8 periods
  const double t_settle = 16.0;
  SimulateOptions opts{dt, t_settle + periods * T, false};
  auto trace =
      sim::simulate_backward_euler(sys, InputSignal::sinusoid(omega), opts);

  const std::size_t n_window = static_cast<std::size_t>(periods) * samples_per_period;
  const std::size_t start = trace.outputs.size() - n_window;
  double total = 0.0;
  std::vector<Complex> window(n_window);
  for (std::size_t k = 0; k < n_window; ++k) {
    window[k] = trace.outputs[start + k];
  }
  // Comb bins: |omega + k w0| maps to bin |33 + 8k| (and the mirror).
  std::vector<double> energy(n_window / 2 + 1, 0.0);
  for (std::size_t bin = 0; bin <= n_window / 2; ++bin) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n_window; ++k) {
      acc += window[k] *
             std::exp(Complex(0.0, -2.0 * kPi * static_cast<double>(bin * k) /
                                       static_cast<double>(n_window)));
    }
    energy[bin] = std::norm(acc);
    total += std::norm(acc);
  }
  double comb = 0.0;
  for (int k = -2; k <= 2; ++k) {
    long bin = std::labs(33 + 8 * k);
    if (bin <= static_cast<long>(n_window / 2)) {
      comb += energy[static_cast<std::size_t>(bin)];
    }
  }
  CHECK(comb >= 0.99 * total);
}
