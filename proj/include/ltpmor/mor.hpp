#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltpmor/lti.hpp"
#include "ltpmor/ltp.hpp"
#include "ltpmor/sim.hpp"
#include "ltpmor/types.hpp"

namespace ltpmor::mor {

/// LTI MIMO companion of a finite-expansion LTP system:
/// H = (Q, [b_{-N},...,b_N], [c_{-N},...,c_N]^T), columns/rows in ascending k.
struct LiftedMimo {
  lti::LtiSystem sys;
  double omega0 = 0.0;
  int N = 0;
};

LiftedMimo lift_to_mimo(const ltp::FloquetFourierSystem& sys);

/// Inverse of lift_to_mimo on the coefficient level. B must have an odd
/// number of columns.
ltp::FloquetFourierSystem unlift_to_ltp(const lti::LtiSystem& H, double omega0);

/// Trial/test bases with W^T V = I_r (transpose, also for complex bases).
struct ProjectionPair {
  Matrix V;
  Matrix W;

  /// max |W^T V - I|
  double biorthogonality_defect() const;
};

/// Petrov-Galerkin projection (W^T A V, W^T B, C V).
lti::LtiSystem project(const lti::LtiSystem& sys, const ProjectionPair& pair);

struct IrkaOptions {
  double tol = 1e-6;   // max relative shift movement
  int max_iter = 100;
  std::uint64_t seed = 0;  // fallback initialization only
  bool track_error = true;
};

struct IrkaDiagnostics {
  int iterations = 0;
  double shift_movement = 0.0;
  bool converged = false;
  double initial_error = 0.0;  // H2 error after the first projection
  double final_error = 0.0;    // H2 error of the returned model
};

struct IrkaResult {
  lti::LtiSystem reduced;
  ProjectionPair projection;
  IrkaDiagnostics diagnostics;
};

/// Iterative rational Krylov fixed point: shifted tangential solves build V
/// and W, the next shifts are the mirrored reduced poles and the next
/// directions the reduced residue directions, until the shifts settle.
/// Returns a stable reduced model satisfying the Hermite tangential
/// interpolation conditions at convergence. Real systems keep conjugate
/// shift pairs and real bases; complex systems iterate in complex
/// arithmetic. r = n reproduces the system.
IrkaResult irka(const lti::LtiSystem& H, int r, const IrkaOptions& opts = {});

/// Galerkin basis from the leading left singular vectors of a (real)
/// snapshot matrix; W = V.
ProjectionPair pod_reduce(const Matrix& snapshots, int r);

/// Square-root balanced truncation backend; returns bases with W^T V = I.
ProjectionPair balanced_truncation(const lti::LtiSystem& H, int r);

struct ReductionReport {
  int r = 0;
  int N = 0;
  std::string method;
  double mimo_error = 0.0;  // ||H_[N] - H~_[N]||_H2 (+inf if unstable)
  std::optional<double> ltp_error;  // ||G_[N] - G~_[N]||_H2 when computed
  double bound = 0.0;               // sqrt(2N+1) * mimo_error
  std::optional<double> fourier_truncation_error;
  IrkaDiagnostics irka;
  bool reduced_stable = true;
};

struct ReductionOptions {
  int r = 1;
  int N = -1;  // Fourier truncation order; -1 keeps the system's order
  std::string method = "irka";  // irka | bt | pod
  IrkaOptions irka;
  int embed_order = -1;  // Zhou-Hagiwara order for ltp_error; -1 -> N
  bool compute_ltp_error = true;
  // POD training run (defaults follow the heat study: unit step over one
  // period, 100 implicit steps).
  sim::InputSignal pod_signal = sim::InputSignal::step(1.0);
  double pod_dt = -1.0;       // -1 -> period/100
  double pod_t_final = -1.0;  // -1 -> one period
};

struct ReductionResult {
  ltp::FloquetFourierSystem reduced;
  lti::LtiSystem reduced_mimo;
  ProjectionPair projection;
  ReductionReport report;
};

/// The four-step H2 reduction pipeline: truncate the Fourier expansions,
/// lift to the MIMO companion, reduce it (IRKA / balanced truncation / POD),
/// and unlift the reduced coefficients back to LTP form. Errors and the
/// sqrt(2N+1) bound are attached to the report.
ReductionResult reduce_ltp_algorithm1(const ltp::FloquetFourierSystem& sys,
                                      const ReductionOptions& opts);

/// ||H - H~||_H2 for a Petrov-Galerkin reduction with C~ = C V, evaluated
/// through the exact cascade realization of the error (coupling
/// E_A = A V - V A~, input residual E_B = B - V B~) with blockwise Gramian
/// solves that never mix the two spectra. Both residuals vanish with the
/// reduction error, so the value stays accurate down to machine zero (an
/// r = n projection), where the plain stacked difference loses every digit
/// to cancellation.
double projected_error_h2(const lti::LtiSystem& full, const Matrix& V,
                          const lti::LtiSystem& reduced);

/// Same cascade evaluation for the LTP H2 error ||G_[N] - G~_[N]|| of
/// coefficient-wise Petrov-Galerkin data, through the frequency-shifted
/// blockwise Gramian traces.
double projected_error_ltp_h2(const ltp::FloquetFourierSystem& full,
                              const Matrix& V,
                              const ltp::FloquetFourierSystem& reduced);

struct ErrorBoundReport {
  double truncation_term = 0.0;  // ||G - G_[N]||, zero when expansion <= N
  bool truncation_term_computed = false;
  double projection_term = 0.0;  // sqrt(2N+1) ||H_[N] - H~_[N]||
  double total = 0.0;
};

/// Two-term a-posteriori bound for ||G - G~_[N]||: Fourier truncation plus
/// the lifted projection error.
ErrorBoundReport error_bound_report(const ltp::FloquetFourierSystem& full,
                                    const ltp::FloquetFourierSystem& reduced,
                                    int N);

}  // namespace ltpmor::mor
