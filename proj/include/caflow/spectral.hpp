#pragma once

// Fourier pseudospectral operations on uniformly sampled 2π-periodic data.
//
// Samples f_k live at p_k = 2πk/N. All operators act on the trigonometric
// interpolant of the samples. For odd derivative orders the Nyquist mode is
// dropped (its derivative is not representable as a real sequence).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace caflow::spectral {

/// Unnormalized half-spectrum (N/2 + 1 coefficients) of a real sequence.
class Spectrum {
 public:
  explicit Spectrum(std::span<const double> samples);

  std::size_t size() const noexcept { return n_; }
  double mean() const noexcept;

  std::vector<double> derivative(int order) const;
  // Periodic antiderivative of the zero-mean part, itself zero-mean.
  std::vector<double> antiderivative() const;
  double max_magnitude() const noexcept;
  // Zeroes every coefficient with magnitude below threshold.
  void chop(double threshold) noexcept;

  // Keeps modes |k| <= N/3, zeroes the rest.
  std::vector<double> truncated_two_thirds() const;

 private:
  std::vector<double> synthesize(std::vector<std::complex<double>> coeffs) const;

  std::size_t n_;
  std::vector<std::complex<double>> coeffs_;
};

std::vector<double> derivative(std::span<const double> samples, int order);

/// ∫_{p_base}^{p_k} f dp at every node, with p_base = 2π·base_node/N.
std::vector<double> cumulative_integral(std::span<const double> samples, std::size_t base_node = 0);

std::vector<double> two_thirds_filter(std::span<const double> samples);

namespace reference {

// Direct O(N²) evaluation of the same derivative operator; serial and
// FFT-free, kept as an independent check of the fast path.
std::vector<double> derivative(std::span<const double> samples, int order);

}  // namespace reference

}  // namespace caflow::spectral
