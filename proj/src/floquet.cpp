#include "ltpmor/floquet.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ltpmor/errors.hpp"
#include "ltpmor/fourier.hpp"
#include "ltpmor/lti.hpp"
#include "ltpmor/parallel.hpp"

namespace ltpmor::floquet {

namespace {

std::size_t next_power_of_two(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// exp(Q t) = S diag(mu^{t/T}) S^{-1} from the monodromy eigendecomposition,
// with Q = (1/T) log(M). t = 0 returns the exact identity.
Matrix propagator(const lti::Spectrum& mspec, const Vector& log_mu, double t,
                  double period) {
  const int n = mspec.size();
  if (t == 0.0) return Matrix::Identity(n, n);
  Vector gains(n);
  for (int j = 0; j < n; ++j) {
    gains(j) = std::exp(log_mu(j) * (t / period));
  }
  return mspec.vectors * gains.asDiagonal() * mspec.inverse;
}

}  // namespace

PeriodicMatrixSampler::PeriodicMatrixSampler(double period, int dim,
                                             Callback eval)
    : period_(period), dim_(dim), eval_(std::move(eval)) {
  if (period <= 0.0) {
    throw std::invalid_argument("PeriodicMatrixSampler: period must be positive");
  }
}

PeriodicMatrixSampler PeriodicMatrixSampler::from_samples(
    double period, std::vector<RealMatrix> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("PeriodicMatrixSampler: no samples");
  }
  if (!fourier::is_power_of_two(samples.size())) {
    throw std::invalid_argument(
        "PeriodicMatrixSampler: sample count must be a power of two");
  }
  const int dim = static_cast<int>(samples[0].rows());
  for (const auto& s : samples) {
    if (s.rows() != dim || s.cols() != dim) {
      throw std::invalid_argument(
          "PeriodicMatrixSampler: samples must be square and consistent");
    }
  }
  PeriodicMatrixSampler out(period, dim, Callback{});
  out.samples_ = std::move(samples);
  return out;
}

RealMatrix PeriodicMatrixSampler::operator()(double t) const {
  double tau = std::fmod(t, period_);
  if (tau < 0.0) tau += period_;
  if (eval_) return eval_(tau);

  // Trigonometric interpolation through the samples.
  const std::size_t g = samples_.size();
  const double pos = tau / period_ * static_cast<double>(g);
  const std::size_t idx = static_cast<std::size_t>(std::llround(pos)) % g;
  if (std::abs(pos - std::llround(pos)) < 1e-12) return samples_[idx];

  std::vector<Vector> flat;
  flat.reserve(g);
  for (const auto& s : samples_) {
    flat.push_back(Eigen::Map<const RealVector>(s.data(), s.size()).cast<Complex>());
  }
  const int N = static_cast<int>(g) / 2 - 1;
  auto coeffs = fourier::coefficients_from_samples(flat, N >= 0 ? N : 0);
  Vector value = fourier::evaluate_series(coeffs, 2.0 * kPi / period_, tau);
  RealMatrix out(dim_, dim_);
  Eigen::Map<RealVector>(out.data(), out.size()) = value.real();
  return out;
}

std::vector<RealMatrix> PeriodicMatrixSampler::sample_uniform(
    std::size_t count) const {
  if (count == 0) throw std::invalid_argument("sample_uniform: zero count");
  if (eval_) {
    std::vector<RealMatrix> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      out.push_back(eval_(period_ * static_cast<double>(j) /
                          static_cast<double>(count)));
    }
    return out;
  }
  return fourier::resample_periodic(samples_, count);
}

namespace {

struct IntegrationPlan {
  std::size_t steps;
  std::vector<RealMatrix> nodes;  // A at t_j and t_j + h/2, 2*steps entries
};

IntegrationPlan plan_integration(const PeriodicMatrixSampler& A,
                                 const IntegrationOptions& opts,
                                 std::size_t checkpoint_grid) {
  std::size_t steps = opts.steps > 0 ? static_cast<std::size_t>(opts.steps) : 1;
  if (A.sampled()) {
    steps = next_power_of_two(std::max(steps, A.samples().size()));
  } else if (checkpoint_grid > 0) {
    // Round up to a multiple of the checkpoint grid.
    steps = ((steps + checkpoint_grid - 1) / checkpoint_grid) * checkpoint_grid;
  }
  if (checkpoint_grid > 0 && steps % checkpoint_grid != 0) {
    steps = next_power_of_two(std::max(steps, checkpoint_grid));
  }
  IntegrationPlan plan;
  plan.steps = steps;
  plan.nodes = A.sample_uniform(2 * steps);
  return plan;
}

// Classical RK4 on X' = A(t) X over one period; optionally records X at the
// checkpoint grid times (checkpoints[0] = X(0) = I).
RealMatrix integrate_fundamental(const PeriodicMatrixSampler& A,
                                 const IntegrationPlan& plan,
                                 std::size_t checkpoint_grid,
                                 std::vector<RealMatrix>* checkpoints) {
  const int n = A.dim();
  const double h = A.period() / static_cast<double>(plan.steps);
  const std::size_t node_count = 2 * plan.steps;
  RealMatrix X = RealMatrix::Identity(n, n);
  if (checkpoints) {
    checkpoints->clear();
    checkpoints->reserve(checkpoint_grid);
    checkpoints->push_back(X);
  }
  const std::size_t stride =
      checkpoint_grid > 0 ? plan.steps / checkpoint_grid : 0;
  RealMatrix K1(n, n), K2(n, n), K3(n, n), K4(n, n);
  for (std::size_t j = 0; j < plan.steps; ++j) {
    const RealMatrix& A0 = plan.nodes[2 * j];
    const RealMatrix& Ah = plan.nodes[2 * j + 1];
    const RealMatrix& A1 = plan.nodes[(2 * j + 2) % node_count];
    K1.noalias() = A0 * X;
    K2.noalias() = Ah * (X + (0.5 * h) * K1);
    K3.noalias() = Ah * (X + (0.5 * h) * K2);
    K4.noalias() = A1 * (X + h * K3);
    X += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    if (checkpoints && stride > 0 && (j + 1) % stride == 0 &&
        (j + 1) < plan.steps) {
      checkpoints->push_back(X);
    }
  }
  return X;
}

}  // namespace

RealMatrix monodromy(const PeriodicMatrixSampler& A,
                     const IntegrationOptions& opts) {
  IntegrationPlan plan = plan_integration(A, opts, 0);
  return integrate_fundamental(A, plan, 0, nullptr);
}

FloquetTransformResult floquet_transform(const PeriodicMatrixSampler& A,
                                         const std::vector<RealVector>& b_samples,
                                         const std::vector<RealVector>& c_samples,
                                         const IntegrationOptions& opts) {
  const std::size_t grid = b_samples.size();
  if (grid == 0 || c_samples.size() != grid) {
    throw std::invalid_argument(
        "floquet_transform: b and c sample grids must match and be nonempty");
  }
  if (!fourier::is_power_of_two(grid)) {
    throw std::invalid_argument(
        "floquet_transform: sample grid must be a power of two");
  }
  const int n = A.dim();
  const double T = A.period();

  IntegrationPlan plan = plan_integration(A, opts, grid);
  std::vector<RealMatrix> X_real;
  RealMatrix M = integrate_fundamental(A, plan, grid, &X_real);

  lti::Spectrum mspec = lti::eigen_decompose(M.cast<Complex>());
  bool warn = false;
  Vector log_mu(n);
  const double scale = mspec.spectral_radius();
  for (int j = 0; j < n; ++j) {
    const Complex mu = mspec.values(j);
    if (std::abs(mu) < 1e-300) {
      throw LogBranchError("floquet_transform: monodromy matrix is singular");
    }
    if (mu.real() <= 0.0 && std::abs(mu.imag()) <= 1e-13 * scale) {
      throw LogBranchError(
          "floquet_transform: monodromy eigenvalue on the closed negative "
          "real axis; principal logarithm undefined");
    }
    if (std::abs(std::arg(mu)) > kPi * (1.0 - 1e-3)) warn = true;
    log_mu(j) = std::log(mu);
  }

  FloquetTransformResult result;
  result.factors.period = T;
  result.factors.monodromy = M;
  result.factors.log_branch_warning = warn;
  result.factors.Q =
      mspec.vectors * (log_mu / T).asDiagonal() * mspec.inverse;

  result.X_samples.resize(grid);
  result.factors.P_samples.resize(grid);
  result.b_samples.resize(grid);
  result.c_samples.resize(grid);
  parallel_for(grid, [&](std::size_t i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(grid);
    Matrix X = X_real[i].cast<Complex>();
    Matrix P = X * propagator(mspec, log_mu, -t, T);
    if (i == 0) P = Matrix::Identity(n, n);
    result.X_samples[i] = std::move(X);
    result.b_samples[i] =
        P.partialPivLu().solve(b_samples[i].cast<Complex>().eval());
    result.c_samples[i] = P.transpose() * c_samples[i].cast<Complex>();
    result.factors.P_samples[i] = std::move(P);
  });
  return result;
}

bool is_hurwitz(const Matrix& Q, double margin) {
  if (Q.rows() == 0) return true;
  return lti::is_stable(Q, margin);
}

}  // namespace ltpmor::floquet
