#pragma once

#include <cstddef>
#include <vector>

#include "ltpmor/types.hpp"

namespace ltpmor::fourier {

bool is_power_of_two(std::size_t v);

/// Coefficients f_k, k = -N..N (stored at index k+N), of the trigonometric
/// interpolant f(t) = sum_k f_k e^{+i k w0 t} through the uniform samples
/// f(j T / g), j = 0..g-1. Requires 2N+1 <= g.
std::vector<Vector> coefficients_from_samples(const std::vector<Vector>& samples,
                                              int N);
std::vector<Vector> coefficients_from_samples(
    const std::vector<RealVector>& samples, int N);

/// sum_k coeffs[k+N] e^{+i k w0 t}
Vector evaluate_series(const std::vector<Vector>& coeffs, double omega0,
                       double t);

/// Series samples on a uniform grid of `grid` points over one period.
std::vector<Vector> samples_from_coefficients(const std::vector<Vector>& coeffs,
                                              int grid);

/// Band-limited resampling of a periodic scalar sample sequence onto a finer
/// uniform grid (trigonometric interpolation; `fine` must be a power-of-two
/// multiple refinement, fine >= samples.size()).
std::vector<double> resample_periodic(const std::vector<double>& samples,
                                      std::size_t fine);

std::vector<RealMatrix> resample_periodic(const std::vector<RealMatrix>& samples,
                                          std::size_t fine);
std::vector<RealVector> resample_periodic(const std::vector<RealVector>& samples,
                                          std::size_t fine);

}  // namespace ltpmor::fourier
