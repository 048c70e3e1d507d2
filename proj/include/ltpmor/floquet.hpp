#pragma once

#include <functional>
#include <vector>

#include "ltpmor/types.hpp"

namespace ltpmor::floquet {

/// T-periodic matrix function A(t), given either as a closed-form callback or
/// as uniform samples over one period (power-of-two count, so trigonometric
/// interpolation round-trips exactly through the DFT).
class PeriodicMatrixSampler {
 public:
  using Callback = std::function<RealMatrix(double)>;

  PeriodicMatrixSampler(double period, int dim, Callback eval);
  static PeriodicMatrixSampler from_samples(double period,
                                            std::vector<RealMatrix> samples);

  double period() const { return period_; }
  int dim() const { return dim_; }
  bool sampled() const { return !samples_.empty(); }
  const std::vector<RealMatrix>& samples() const { return samples_; }

  /// A(t) with t wrapped into [0, T).
  RealMatrix operator()(double t) const;

  /// A at the uniform grid t_j = jT/count. For sampled data, count must be a
  /// power-of-two multiple of the sample count (band-limited refinement).
  std::vector<RealMatrix> sample_uniform(std::size_t count) const;

 private:
  double period_;
  int dim_;
  Callback eval_;
  std::vector<RealMatrix> samples_;
};

struct FloquetFactors {
  Matrix Q;                        // constant Floquet state map, possibly complex
  std::vector<Matrix> P_samples;   // P(t_i) on the sample grid, P(0) = I exactly
  RealMatrix monodromy;            // M = X(T)
  double period = 0.0;
  // Set when some monodromy eigenvalue has |arg| near pi: the principal
  // logarithm branch is poorly conditioned there.
  bool log_branch_warning = false;
};

struct IntegrationOptions {
  int steps = 2048;  // fixed RK4 steps per period
};

/// X(T) from integrating X' = A(t)X, X(0) = I, over one period with
/// fixed-step classical RK4.
RealMatrix monodromy(const PeriodicMatrixSampler& A,
                     const IntegrationOptions& opts = {});

struct FloquetTransformResult {
  FloquetFactors factors;
  std::vector<Matrix> X_samples;  // fundamental matrix at the grid times
  std::vector<Vector> b_samples;  // P^{-1}(t_i) b(t_i)
  std::vector<Vector> c_samples;  // P(t_i)^T c(t_i)
};

/// Floquet transformation: Q = (1/T) log M through the eigendecomposition of
/// M (principal branch), P(t_i) = X(t_i) e^{-Q t_i} on the grid of the b/c
/// samples, and the transformed input/output samples. Throws LogBranchError
/// when M has an eigenvalue on the closed negative real axis and
/// DefectiveMatrixError when M is numerically defective.
FloquetTransformResult floquet_transform(const PeriodicMatrixSampler& A,
                                         const std::vector<RealVector>& b_samples,
                                         const std::vector<RealVector>& c_samples,
                                         const IntegrationOptions& opts = {});

/// All Re(lambda(Q)) < -margin: the finiteness gate for every LTP H2
/// computation.
bool is_hurwitz(const Matrix& Q, double margin = kStabilityMargin);

}  // namespace ltpmor::floquet
