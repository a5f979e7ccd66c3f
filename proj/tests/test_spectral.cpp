#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "caflow/curve.hpp"
#include "caflow/error.hpp"
#include "caflow/spectral.hpp"

using namespace caflow;

namespace {

std::vector<double> sampled(std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(grid_parameter(k, n));
  return v;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("fast derivative matches the direct reference") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    for (int order = 1; order <= 4; ++order) {
      const auto fast = spectral::derivative(v, order);
      const auto slow = spectral::reference::derivative(v, order);
      double scale = 0.0;
      for (double x : slow) scale = std::max(scale, std::abs(x));
      CHECK(max_diff(fast, slow) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("odd derivatives drop the Nyquist mode") {
  const std::size_t n = 16;
  const auto nyquist = sampled(n, [](double p) { return std::cos(8 * p); });
  const auto d1 = spectral::derivative(nyquist, 1);
  for (double x : d1) CHECK(std::abs(x) <= 1e-12);
  const auto d2 = spectral::derivative(nyquist, 2);
  CHECK(d2[0] == doctest::Approx(-64.0));
}

TEST_CASE("antiderivative and cumulative integral") {
  const std::size_t n = 64;
  const auto f = sampled(n, [](double p) { return std::cos(p) + 0.3 * std::sin(3 * p); });
  const auto anti = spectral::Spectrum(f).antiderivative();
  const auto expected = sampled(n, [](double p) { return std::sin(p) - 0.1 * std::cos(3 * p); });
  CHECK(max_diff(anti, expected) <= 1e-13);

  const auto cum = spectral::cumulative_integral(f);
  CHECK(cum[0] == 0.0);
  const auto exact = sampled(n, [](double p) { return std::sin(p) + 0.1 - 0.1 * std::cos(3 * p); });
  CHECK(max_diff(cum, exact) <= 1e-13);

  // Base node n/2 is p = π.
  const auto cum_pi = spectral::cumulative_integral(f, n / 2);
  CHECK(std::abs(cum_pi[n / 2]) <= 1e-15);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs((cum[k] - cum_pi[k]) - cum[n / 2]) <= 1e-13);

  // A nonzero mean contributes a linear ramp.
  const auto ones = std::vector<double>(n, 1.0);
  const auto ramp = spectral::cumulative_integral(ones);
  for (std::size_t k = 0; k < n; ++k) CHECK(ramp[k] == doctest::Approx(grid_parameter(k, n)).epsilon(1e-13));
}

TEST_CASE("two-thirds filter") {
  const std::size_t n = 48;
  const auto low = sampled(n, [](double p) { return std::cos(16 * p) + std::sin(3 * p); });
  CHECK(max_diff(spectral::two_thirds_filter(low), low) <= 1e-13);
  const auto high = sampled(n, [](double p) { return std::cos(17 * p); });
  for (double x : spectral::two_thirds_filter(high)) CHECK(std::abs(x) <= 1e-14);
}

TEST_CASE("spectrum bookkeeping") {
  const auto f = sampled(32, [](double p) { return 2.5 + std::cos(p); });
  spectral::Spectrum s(f);
  CHECK(s.size() == 32);
  CHECK(s.mean() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(s.max_magnitude() == doctest::Approx(2.5 * 32).epsilon(1e-14));
  s.chop(50.0);
  CHECK(s.mean() == doctest::Approx(2.5).epsilon(1e-15));
  for (double x : s.derivative(1)) CHECK(x == 0.0);

  CHECK_THROWS_AS(spectral::Spectrum(std::vector<double>(7, 1.0)), Error);
  CHECK_THROWS_AS(spectral::derivative(f, 0), Error);
}
