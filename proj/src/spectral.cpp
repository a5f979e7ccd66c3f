#include "caflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "caflow/error.hpp"

namespace caflow::spectral {
namespace {

struct Plans {
  fftw_plan forward;
  fftw_plan backward;
};

// Planning is not thread-safe in FFTW; execution through the new-array
// interface is. Plans live for the whole process.
const Plans& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int len = static_cast<int>(n);
  double* real = fftw_alloc_real(n);
  fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans plans{fftw_plan_dft_r2c_1d(len, real, cplx, flags),
              fftw_plan_dft_c2r_1d(len, cplx, real, flags)};
  fftw_free(real);
  fftw_free(cplx);
  return cache.emplace(n, plans).first->second;
}

void require_even(std::size_t n) {
  if (n < 2 || n % 2 != 0) fail(ErrorKind::InvalidInput, "spectral grid size must be even and >= 2");
}

std::complex<double> ik_power(double k, int order) {
  std::complex<double> factor{1.0, 0.0};
  const std::complex<double> ik{0.0, k};
  for (int i = 0; i < order; ++i) factor *= ik;
  return factor;
}

}  // namespace

Spectrum::Spectrum(std::span<const double> samples) : n_(samples.size()), coeffs_(samples.size() / 2 + 1) {
  require_even(n_);
  const Plans& plans = plans_for(n_);
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(coeffs_.data()));
}

double Spectrum::mean() const noexcept { return coeffs_[0].real() / static_cast<double>(n_); }

double Spectrum::max_magnitude() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

void Spectrum::chop(double threshold) noexcept {
  for (auto& c : coeffs_) {
    if (std::abs(c) < threshold) c = 0.0;
  }
}

std::vector<double> Spectrum::synthesize(std::vector<std::complex<double>> coeffs) const {
  std::vector<double> out(n_);
  const Plans& plans = plans_for(n_);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(coeffs.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> Spectrum::derivative(int order) const {
  if (order < 1) fail(ErrorKind::InvalidInput, "derivative order must be >= 1");
  const std::size_t half = n_ / 2;
  std::vector<std::complex<double>> c(coeffs_.size());
  for (std::size_t k = 0; k <= half; ++k) c[k] = coeffs_[k] * ik_power(static_cast<double>(k), order);
  if (order % 2 == 1) c[half] = 0.0;
  return synthesize(std::move(c));
}

std::vector<double> Spectrum::antiderivative() const {
  const std::size_t half = n_ / 2;
  std::vector<std::complex<double>> c(coeffs_.size());
  c[0] = 0.0;
  for (std::size_t k = 1; k < half; ++k) c[k] = coeffs_[k] / std::complex<double>(0.0, static_cast<double>(k));
  c[half] = 0.0;
  return synthesize(std::move(c));
}

std::vector<double> Spectrum::truncated_two_thirds() const {
  const std::size_t keep = n_ / 3;
  std::vector<std::complex<double>> c(coeffs_);
  for (std::size_t k = keep + 1; k < c.size(); ++k) c[k] = 0.0;
  return synthesize(std::move(c));
}

std::vector<double> derivative(std::span<const double> samples, int order) {
  return Spectrum(samples).derivative(order);
}

std::vector<double> cumulative_integral(std::span<const double> samples, std::size_t base_node) {
  const std::size_t n = samples.size();
  if (base_node >= n) fail(ErrorKind::InvalidInput, "base node outside the grid");
  const Spectrum spectrum(samples);
  const double mean = spectrum.mean();
  std::vector<double> out = spectrum.antiderivative();
  const double anchor = out[base_node];
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double offset = (static_cast<double>(k) - static_cast<double>(base_node)) * h;
    out[k] = out[k] - anchor + mean * offset;
  }
  return out;
}

std::vector<double> two_thirds_filter(std::span<const double> samples) {
  return Spectrum(samples).truncated_two_thirds();
}

namespace reference {

std::vector<double> derivative(std::span<const double> samples, int order) {
  if (order < 1) fail(ErrorKind::InvalidInput, "derivative order must be >= 1");
  const std::size_t n = samples.size();
  require_even(n);
  const std::size_t half = n / 2;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);

  // Real trigonometric interpolant: f = a0/2 + Σ (a_k cos kp + b_k sin kp) + (a_{N/2}/2) cos(N p/2).
  std::vector<double> a(half + 1, 0.0), b(half + 1, 0.0);
  for (std::size_t k = 0; k <= half; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = h * static_cast<double>((k * j) % n);
      a[k] += samples[j] * std::cos(angle);
      b[k] += samples[j] * std::sin(angle);
    }
    a[k] *= 2.0 / static_cast<double>(n);
    b[k] *= 2.0 / static_cast<double>(n);
  }

  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
      if (k == half && order % 2 == 1) continue;
      const double weight = (k == half) ? 0.5 : 1.0;
      const double kk = static_cast<double>(k);
      const double angle = h * static_cast<double>((k * j) % n);
      // d^m/dp^m of cos(kp) = k^m cos(kp + mπ/2), same for sin.
      const double shift = order * std::numbers::pi / 2.0;
      const double km = std::pow(kk, order);
      sum += weight * km * (a[k] * std::cos(angle + shift) + b[k] * std::sin(angle + shift));
    }
    out[j] = sum;
  }
  return out;
}

}  // namespace reference

}  // namespace caflow::spectral
