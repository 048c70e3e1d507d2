#include "ltpmor/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "ltpmor/errors.hpp"
#include "ltpmor/fourier.hpp"

namespace ltpmor::sim {

InputSignal InputSignal::step(double amplitude) {
  InputSignal s;
  s.kind = Kind::Step;
  s.amplitude = amplitude;
  return s;
}

InputSignal InputSignal::pulse(double t_off, double amplitude) {
  InputSignal s;
  s.kind = Kind::Pulse;
  s.t_off = t_off;
  s.amplitude = amplitude;
  return s;
}

InputSignal InputSignal::sinusoid(double omega, double phase, double amplitude) {
  InputSignal s;
  s.kind = Kind::Sinusoid;
  s.omega = omega;
  s.phase = phase;
  s.amplitude = amplitude;
  return s;
}

InputSignal InputSignal::sampled(std::vector<double> values) {
  InputSignal s;
  s.kind = Kind::Sampled;
  s.samples = std::move(values);
  return s;
}

double InputSignal::operator()(double t, std::size_t grid_index) const {
  switch (kind) {
    case Kind::Step:
      return amplitude;
    case Kind::Pulse:
      return t <= t_off ? amplitude : 0.0;
    case Kind::Sinusoid:
      return amplitude * std::sin(omega * t + phase);
    case Kind::Sampled:
      if (grid_index >= samples.size()) {
        throw std::invalid_argument(
            "InputSignal: sampled signal shorter than the simulation grid");
      }
      return samples[grid_index];
  }
  return 0.0;
}

namespace {

// Common implicit-Euler loop; b_at/c_at provide the (possibly
// time-dependent) input/output maps at a grid time.
template <typename BAt, typename CAt>
SimulationTrace backward_euler_loop(const Matrix& A, BAt&& b_at, CAt&& c_at,
                                    const InputSignal& u,
                                    const SimulateOptions& opts) {
  if (opts.dt <= 0.0) throw std::invalid_argument("simulate: dt must be positive");
  if (opts.t_final < 0.0) throw std::invalid_argument("simulate: t_final < 0");
  const int n = static_cast<int>(A.rows());
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(opts.t_final / opts.dt));

  Matrix implicit = -opts.dt * A;
  implicit.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Matrix> lu(implicit);
  if (lu.rcond() < 1e-14) {
    throw SingularShiftError(
        "simulate_backward_euler: I - dt A is numerically singular");
  }

  SimulationTrace trace;
  trace.times.resize(steps + 1);
  trace.inputs.resize(steps + 1);
  trace.outputs.resize(steps + 1);
  if (opts.record_states) trace.states = Matrix::Zero(n, steps + 1);

  Vector x = Vector::Zero(n);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = opts.dt * static_cast<double>(k);
    trace.times[k] = t;
    trace.inputs[k] = u(t, k);
    trace.outputs[k] = (c_at(t, k).transpose() * x)(0).real();
    if (opts.record_states) trace.states.col(k) = x;
    if (k == steps) break;
    const double t_next = opts.dt * static_cast<double>(k + 1);
    const double u_next = u(t_next, k + 1);
    x = lu.solve((x + opts.dt * u_next * b_at(t_next, k + 1)).eval());
  }
  return trace;
}

}  // namespace

SimulationTrace simulate_backward_euler(const lti::LtiSystem& sys,
                                        const InputSignal& u,
                                        const SimulateOptions& opts) {
  if (sys.m() != 1 || sys.p() != 1) {
    throw std::invalid_argument("simulate_backward_euler: SISO systems only");
  }
  Vector b = sys.B.col(0);
  Vector c = sys.C.row(0).transpose();
  return backward_euler_loop(
      sys.A, [&](double, std::size_t) -> const Vector& { return b; },
      [&](double, std::size_t) -> const Vector& { return c; }, u, opts);
}

SimulationTrace simulate_backward_euler(const ltp::FloquetFourierSystem& sys,
                                        const InputSignal& u,
                                        const SimulateOptions& opts) {
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(opts.t_final / opts.dt));
  std::vector<Vector> b_grid(steps + 1), c_grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = opts.dt * static_cast<double>(k);
    b_grid[k] = sys.eval_b(t);
    c_grid[k] = sys.eval_c(t);
  }
  return backward_euler_loop(
      sys.Q(), [&](double, std::size_t k) -> const Vector& { return b_grid[k]; },
      [&](double, std::size_t k) -> const Vector& { return c_grid[k]; }, u, opts);
}

HeatBenchmark build_heat_benchmark(int n_interior, int grid_t,
                                   bool split_source) {
  if (n_interior < 3) {
    throw std::invalid_argument("build_heat_benchmark: need n_interior >= 3");
  }
  if (grid_t < 4 || !fourier::is_power_of_two(static_cast<std::size_t>(grid_t))) {
    throw std::invalid_argument(
        "build_heat_benchmark: grid_t must be a power of two >= 4");
  }
  const double T = 100.0;
  const double h = 1.0 / (n_interior + 1);

  RealMatrix A = RealMatrix::Zero(n_interior, n_interior);
  for (int i = 0; i < n_interior; ++i) {
    A(i, i) = -2.0 / (h * h);
    if (i > 0) A(i, i - 1) = 1.0 / (h * h);
    if (i + 1 < n_interior) A(i, i + 1) = 1.0 / (h * h);
  }

  RealVector c_pick = RealVector::Zero(n_interior);
  const int mid = static_cast<int>(std::lround(0.5 / h));  // node x = mid*h
  c_pick(mid - 1) = 1.0;                                   // interior index

  std::vector<RealVector> b_samples;
  std::vector<int> source_nodes;
  b_samples.reserve(static_cast<std::size_t>(grid_t));
  source_nodes.reserve(static_cast<std::size_t>(grid_t));
  for (int j = 0; j < grid_t; ++j) {
    const double t = T * static_cast<double>(j) / grid_t;
    const double xi = 0.5 + 0.4 * std::sin(8.0 * kPi * t / T);
    RealVector b = RealVector::Zero(n_interior);
    if (split_source) {
      // Linear splitting across the two neighbouring nodes.
      const double pos = xi / h;  // node coordinate
      int left = static_cast<int>(std::floor(pos));
      double w_right = pos - left;
      if (left >= 1 && left <= n_interior) b(left - 1) += (1.0 - w_right) / h;
      if (left + 1 >= 1 && left + 1 <= n_interior) b(left) += w_right / h;
      source_nodes.push_back(static_cast<int>(std::lround(pos)));
    } else {
      const int node = static_cast<int>(std::lround(xi / h));
      source_nodes.push_back(node);
      if (node >= 1 && node <= n_interior) b(node - 1) = 1.0 / h;
    }
    b_samples.push_back(std::move(b));
  }

  const int N = grid_t / 2 - 1;
  std::vector<Vector> b_coeffs = fourier::coefficients_from_samples(b_samples, N);
  std::vector<Vector> c_coeffs(static_cast<std::size_t>(2 * N + 1),
                               Vector::Zero(n_interior));
  c_coeffs[static_cast<std::size_t>(N)] = c_pick.cast<Complex>();

  return HeatBenchmark{
      ltp::FloquetFourierSystem(A.cast<Complex>(), 2.0 * kPi / T,
                                std::move(b_coeffs), std::move(c_coeffs)),
      std::move(A), std::move(c_pick), std::move(b_samples),
      std::move(source_nodes), T};
}

ltp::FloquetFourierSystem build_modulated_benchmark(const lti::LtiSystem& base,
                                                    double omega0) {
  if (base.m() != 3 || base.p() != 3) {
    throw std::invalid_argument(
        "build_modulated_benchmark: base system must have 3 inputs and 3 "
        "outputs");
  }
  const int n = base.n();
  std::vector<Vector> b(5, Vector::Zero(n)), c(5, Vector::Zero(n));
  // cos(k w0 t) splits into (e^{+ik w0 t} + e^{-ik w0 t})/2.
  b[2] = base.B.col(0);
  b[3] = 0.5 * base.B.col(1);
  b[1] = 0.5 * base.B.col(1);
  b[4] = 0.5 * base.B.col(2);
  b[0] = 0.5 * base.B.col(2);
  c[2] = base.C.row(0).transpose();
  c[3] = 0.5 * base.C.row(1).transpose();
  c[1] = 0.5 * base.C.row(1).transpose();
  c[4] = 0.5 * base.C.row(2).transpose();
  c[0] = 0.5 * base.C.row(2).transpose();
  return ltp::FloquetFourierSystem(base.A, omega0, std::move(b), std::move(c));
}

lti::LtiSystem make_structural_base(int modes, std::uint64_t seed) {
  if (modes < 1) throw std::invalid_argument("make_structural_base: modes >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.5, 40.0);
  std::uniform_real_distribution<double> damp(0.002, 0.02);
  std::normal_distribution<double> port(0.0, 1.0);

  const int n = 2 * modes;
  RealMatrix A = RealMatrix::Zero(n, n);
  RealMatrix B = RealMatrix::Zero(n, 3);
  RealMatrix C = RealMatrix::Zero(3, n);
  for (int m = 0; m < modes; ++m) {
    const double w = freq(rng);
    const double z = damp(rng);
    A(2 * m, 2 * m + 1) = w;
    A(2 * m + 1, 2 * m) = -w;
    A(2 * m, 2 * m) = -z * w;
    A(2 * m + 1, 2 * m + 1) = -z * w;
    for (int j = 0; j < 3; ++j) {
      B(2 * m + 1, j) = port(rng);
      C(j, 2 * m) = port(rng);
    }
  }
  return lti::LtiSystem(A.cast<Complex>(), B.cast<Complex>(), C.cast<Complex>());
}

ltp::FloquetFourierSystem make_synthetic_transmission_ltp(int n, int N,
                                                          std::uint64_t seed) {
  if (n < 2 || N < 1) {
    throw std::invalid_argument("make_synthetic_transmission_ltp: n >= 2, N >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> decay_rate(20.0, 400.0);
  std::uniform_real_distribution<double> osc(0.0, 3.0 * 2.0 * kPi * 60.0);

  const double omega0 = 2.0 * kPi * 60.0;
  // Oscillator ladder with spread damping, on the circuit's time scale.
  RealMatrix A = RealMatrix::Zero(n, n);
  int i = 0;
  while (i < n) {
    const double a = decay_rate(rng);
    if (i + 1 < n) {
      const double w = osc(rng);
      A(i, i) = -a;
      A(i + 1, i + 1) = -a;
      A(i, i + 1) = w;
      A(i + 1, i) = -w;
      i += 2;
    } else {
      A(i, i) = -a;
      ++i;
    }
  }

  std::vector<Vector> b(static_cast<std::size_t>(2 * N + 1));
  std::vector<Vector> c(static_cast<std::size_t>(2 * N + 1));
  for (int k = 0; k <= N; ++k) {
    // Geometric harmonic decay keeps the ladder summable, as a saturating
    // periodic linearization produces.
    const double scale = std::pow(0.55, k);
    Vector bk(n), ck(n);
    for (int j = 0; j < n; ++j) {
      bk(j) = scale * Complex(gauss(rng), k == 0 ? 0.0 : gauss(rng));
      ck(j) = scale * Complex(gauss(rng), k == 0 ? 0.0 : gauss(rng));
    }
    b[static_cast<std::size_t>(N + k)] = bk;
    b[static_cast<std::size_t>(N - k)] = bk.conjugate();
    c[static_cast<std::size_t>(N + k)] = ck;
    c[static_cast<std::size_t>(N - k)] = ck.conjugate();
  }
  return ltp::FloquetFourierSystem(A.cast<Complex>(), omega0, std::move(b),
                                   std::move(c));
}

}  // namespace ltpmor::sim
