#pragma once

#include <cstdint>
#include <vector>

#include "ltpmor/lti.hpp"
#include "ltpmor/ltp.hpp"
#include "ltpmor/types.hpp"

namespace ltpmor::sim {

struct InputSignal {
  enum class Kind { Step, Pulse, Sinusoid, Sampled };

  Kind kind = Kind::Step;
  double amplitude = 1.0;
  double omega = 0.0;   // sinusoid frequency
  double phase = 0.0;
  double t_off = 0.0;   // pulse: u = amplitude for t <= t_off
  std::vector<double> samples;  // sampled signal, one value per grid point

  static InputSignal step(double amplitude = 1.0);
  static InputSignal pulse(double t_off, double amplitude = 1.0);
  static InputSignal sinusoid(double omega, double phase = 0.0,
                              double amplitude = 1.0);
  static InputSignal sampled(std::vector<double> values);

  double operator()(double t, std::size_t grid_index) const;
};

struct SimulationTrace {
  std::vector<double> times;
  std::vector<double> inputs;
  std::vector<double> outputs;
  /// State snapshots x_0..x_K (n x K+1) when recorded; empty otherwise.
  Matrix states;
};

struct SimulateOptions {
  double dt = 1e-2;
  double t_final = 1.0;
  bool record_states = false;
};

/// Implicit Euler x_{k+1} = (I - dt A)^{-1}(x_k + dt b(t_{k+1}) u_{k+1}),
/// y_k = c(t_k)^T x_k, x_0 = 0. The implicit factorization is computed once
/// (the state matrix is constant in both supported forms). SISO only.
SimulationTrace simulate_backward_euler(const lti::LtiSystem& sys,
                                        const InputSignal& u,
                                        const SimulateOptions& opts);

/// Periodic variant: b(t), c(t) are evaluated from the Fourier coefficients
/// at the grid times.
SimulationTrace simulate_backward_euler(const ltp::FloquetFourierSystem& sys,
                                        const InputSignal& u,
                                        const SimulateOptions& opts);

/// 1D heat rod with homogeneous Dirichlet ends, a midpoint temperature tap,
/// and a point source moving along xi(t) = 0.5 + 0.4 sin(8 pi t / T), T = 100.
/// Second differences on n_interior nodes give the constant tridiagonal state
/// map; the source lands on the nearest grid node scaled by 1/h (or is split
/// linearly across the two neighbours when split_source is set). The Fourier
/// form keeps N = grid_t/2 - 1 harmonics of the sampled source.
struct HeatBenchmark {
  ltp::FloquetFourierSystem system;
  RealMatrix A;
  RealVector c;
  std::vector<RealVector> b_samples;  // one period, grid_t uniform samples
  std::vector<int> source_nodes;      // nearest-node index sequence
  double period = 100.0;
};

HeatBenchmark build_heat_benchmark(int n_interior, int grid_t,
                                   bool split_source = false);

/// SISO LTP system from a 3-input/3-output LTI base by modulating inputs and
/// outputs 2 and 3 at w0 and 2 w0:
///   b(t) = b0 + b1 cos(w0 t) + b2 cos(2 w0 t), likewise c(t); N = 2.
ltp::FloquetFourierSystem build_modulated_benchmark(const lti::LtiSystem& base,
                                                    double omega0);

/// Lightly damped 3-in/3-out stand-in for a structural model: `modes`
/// second-order oscillator pairs with seeded random frequencies, damping and
/// port vectors.
lti::LtiSystem make_structural_base(int modes, std::uint64_t seed);

/// Synthetic Floquet-Fourier system shaped like a periodically linearized
/// transmission line: n states, fundamental frequency 2 pi * 60, and a
/// geometrically decaying harmonic ladder of order N.
ltp::FloquetFourierSystem make_synthetic_transmission_ltp(int n, int N,
                                                          std::uint64_t seed);

}  // namespace ltpmor::sim
