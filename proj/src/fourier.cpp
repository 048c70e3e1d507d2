#include "ltpmor/fourier.hpp"

#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "ltpmor/errors.hpp"

namespace ltpmor::fourier {

namespace {

// Forward DFT, unnormalized: F_k = sum_j f_j e^{-2 pi i k j / g}.
std::vector<Complex> dft(const std::vector<Complex>& samples) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, samples);
  return out;
}

std::vector<Complex> idft(const std::vector<Complex>& spectrum) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, spectrum);  // normalized by 1/g
  return out;
}

}  // namespace

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<Vector> coefficients_from_samples(const std::vector<Vector>& samples,
                                              int N) {
  const std::size_t g = samples.size();
  if (g == 0) throw std::invalid_argument("coefficients_from_samples: no samples");
  if (2 * N + 1 > static_cast<int>(g)) {
    throw std::invalid_argument(
        "coefficients_from_samples: need at least 2N+1 samples");
  }
  const Eigen::Index n = samples[0].size();
  std::vector<Vector> coeffs(2 * N + 1, Vector::Zero(n));
  std::vector<Complex> series(g);
  for (Eigen::Index comp = 0; comp < n; ++comp) {
    for (std::size_t j = 0; j < g; ++j) series[j] = samples[j](comp);
    // With samples f(jT/g) and the e^{+ikw0t} convention, f_k = F_k / g with
    // negative indices wrapped.
    std::vector<Complex> spectrum = dft(series);
    for (int k = -N; k <= N; ++k) {
      std::size_t bin = k >= 0 ? static_cast<std::size_t>(k)
                               : g - static_cast<std::size_t>(-k);
      coeffs[static_cast<std::size_t>(k + N)](comp) =
          spectrum[bin] / static_cast<double>(g);
    }
  }
  return coeffs;
}

std::vector<Vector> coefficients_from_samples(
    const std::vector<RealVector>& samples, int N) {
  std::vector<Vector> complex_samples;
  complex_samples.reserve(samples.size());
  for (const auto& s : samples) complex_samples.push_back(s.cast<Complex>());
  return coefficients_from_samples(complex_samples, N);
}

Vector evaluate_series(const std::vector<Vector>& coeffs, double omega0,
                       double t) {
  if (coeffs.empty()) throw std::invalid_argument("evaluate_series: empty");
  const int N = (static_cast<int>(coeffs.size()) - 1) / 2;
  Vector out = Vector::Zero(coeffs[0].size());
  for (int k = -N; k <= N; ++k) {
    out += coeffs[static_cast<std::size_t>(k + N)] *
           std::exp(Complex(0.0, k * omega0 * t));
  }
  return out;
}

std::vector<Vector> samples_from_coefficients(const std::vector<Vector>& coeffs,
                                              int grid) {
  if (grid < static_cast<int>(coeffs.size())) {
    throw std::invalid_argument(
        "samples_from_coefficients: grid shorter than coefficient count");
  }
  const double omega0 = 1.0;  // phase kw0 t = 2 pi k j / grid independent of w0
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(grid));
  const double T = 2.0 * kPi / omega0;
  for (int j = 0; j < grid; ++j) {
    out.push_back(evaluate_series(coeffs, omega0, T * j / grid));
  }
  return out;
}

std::vector<double> resample_periodic(const std::vector<double>& samples,
                                      std::size_t fine) {
  const std::size_t g = samples.size();
  if (fine == g) return samples;
  if (fine < g || fine % g != 0 || !is_power_of_two(fine / g)) {
    throw std::invalid_argument(
        "resample_periodic: fine grid must be a power-of-two multiple");
  }
  std::vector<Complex> series(g);
  for (std::size_t j = 0; j < g; ++j) series[j] = samples[j];
  std::vector<Complex> spectrum = dft(series);

  // Zero-pad the spectrum; the Nyquist bin of an even-length transform is
  // split between +g/2 and -g/2 so the interpolant stays real.
  std::vector<Complex> padded(fine, Complex(0.0, 0.0));
  const std::size_t half = g / 2;
  padded[0] = spectrum[0];
  for (std::size_t k = 1; k < half; ++k) {
    padded[k] = spectrum[k];
    padded[fine - k] = spectrum[g - k];
  }
  if (g % 2 == 0 && half >= 1) {
    padded[half] = 0.5 * spectrum[half];
    padded[fine - half] = 0.5 * spectrum[half];
  } else if (g % 2 == 1) {
    padded[half] = spectrum[half];
    padded[fine - half] = spectrum[g - half];
  }

  std::vector<Complex> fine_series = idft(padded);
  std::vector<double> out(fine);
  const double scale = static_cast<double>(fine) / static_cast<double>(g);
  for (std::size_t j = 0; j < fine; ++j) out[j] = fine_series[j].real() * scale;
  return out;
}

namespace {
template <typename Mat>
std::vector<Mat> resample_entrywise(const std::vector<Mat>& samples,
                                    std::size_t fine) {
  const std::size_t g = samples.size();
  if (g == 0) throw std::invalid_argument("resample_periodic: no samples");
  if (fine == g) return samples;
  const Eigen::Index rows = samples[0].rows();
  const Eigen::Index cols = samples[0].cols();
  std::vector<Mat> out(fine, Mat::Zero(rows, cols));
  std::vector<double> series(g);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (std::size_t j = 0; j < g; ++j) series[j] = samples[j](r, c);
      std::vector<double> fine_series = resample_periodic(series, fine);
      for (std::size_t j = 0; j < fine; ++j) out[j](r, c) = fine_series[j];
    }
  }
  return out;
}
}  // namespace

std::vector<RealMatrix> resample_periodic(const std::vector<RealMatrix>& samples,
                                          std::size_t fine) {
  return resample_entrywise(samples, fine);
}

std::vector<RealVector> resample_periodic(const std::vector<RealVector>& samples,
                                          std::size_t fine) {
  return resample_entrywise(samples, fine);
}

}  // namespace ltpmor::fourier
