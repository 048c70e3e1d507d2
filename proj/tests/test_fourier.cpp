#include <cmath>
#include <random>

#include "doctest.h"
#include "ltpmor/fourier.hpp"

using namespace ltpmor;

TEST_CASE("coefficients recover a known cosine expansion") {
  // f(t) = 1 + cos(w0 t) has f_0 = 1, f_{+-1} = 1/2 under e^{+ik w0 t}.
  const int g = 16;
  std::vector<RealVector> samples;
  for (int j = 0; j < g; ++j) {
    RealVector v(1);
    v(0) = 1.0 + std::cos(2.0 * kPi * j / g);
    samples.push_back(v);
  }
  auto coeffs = fourier::coefficients_from_samples(samples, 2);
  CHECK(std::abs(coeffs[2](0) - Complex(1.0)) <= 1e-14);
  CHECK(std::abs(coeffs[3](0) - Complex(0.5)) <= 1e-14);
  CHECK(std::abs(coeffs[1](0) - Complex(0.5)) <= 1e-14);
  CHECK(std::abs(coeffs[0](0)) <= 1e-14);
  CHECK(std::abs(coeffs[4](0)) <= 1e-14);
}

TEST_CASE("series round-trips through samples on a power-of-two grid") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int N = 3, n = 2, g = 16;
  std::vector<Vector> coeffs(2 * N + 1);
  for (auto& c : coeffs) {
    c = Vector(n);
    for (int i = 0; i < n; ++i) c(i) = Complex(gauss(rng), gauss(rng));
  }
  auto samples = fourier::samples_from_coefficients(coeffs, g);
  auto back = fourier::coefficients_from_samples(samples, N);
  for (int k = 0; k < 2 * N + 1; ++k) {
    CHECK((back[k] - coeffs[k]).norm() <= 1e-13);
  }
}

TEST_CASE("evaluate_series matches a direct sum") {
  std::vector<Vector> coeffs(3, Vector::Zero(1));
  coeffs[0](0) = Complex(0.0, -0.5);
  coeffs[1](0) = 2.0;
  coeffs[2](0) = Complex(0.0, 0.5);
  const double w0 = 3.0, t = 0.37;
  Complex expect = 2.0 + Complex(0.0, 0.5) * std::exp(Complex(0.0, w0 * t)) +
                   Complex(0.0, -0.5) * std::exp(Complex(0.0, -w0 * t));
  CHECK(std::abs(fourier::evaluate_series(coeffs, w0, t)(0) - expect) <= 1e-14);
}

TEST_CASE("periodic resampling is exact on band-limited data") {
  const int g = 8, fine = 32;
  std::vector<double> samples(g);
  for (int j = 0; j < g; ++j) {
    samples[j] = 1.2 + std::cos(2.0 * kPi * j / g) - 0.4 * std::sin(4.0 * kPi * j / g);
  }
  auto up = fourier::resample_periodic(samples, fine);
  for (int j = 0; j < fine; ++j) {
    const double t = static_cast<double>(j) / fine;
    const double expect =
        1.2 + std::cos(2.0 * kPi * t) - 0.4 * std::sin(4.0 * kPi * t);
    CHECK(up[static_cast<std::size_t>(j)] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("resampling validates the refinement factor") {
  std::vector<double> samples(8, 1.0);
  CHECK_THROWS_AS((void)fourier::resample_periodic(samples, 12),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)fourier::resample_periodic(samples, 4),
                  std::invalid_argument);
}

TEST_CASE("power-of-two recognition") {
  CHECK(fourier::is_power_of_two(1));
  CHECK(fourier::is_power_of_two(64));
  CHECK(!fourier::is_power_of_two(0));
  CHECK(!fourier::is_power_of_two(48));
}
