#include "caflow/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "caflow/error.hpp"
#include "caflow/flow_curvature.hpp"

namespace caflow {

DiagnosticsRecord measure(double t, std::span<const double> g, std::span<const double> phi, int sobolev_max_n) {
  const std::size_t n = g.size();
  DiagnosticsRecord r;
  r.t = t;
  r.sobolev.fill(DiagnosticsRecord::kNaN);

  std::vector<double> density(n);
  auto integrate = [&](auto&& f) {
    for (std::size_t k = 0; k < n; ++k) density[k] = f(k) * g[k];
    return periodic_integral(density);
  };

  r.L = periodic_integral(g);
  r.E = integrate([&](std::size_t k) { return phi[k] * phi[k]; });
  r.mean_phi = integrate([&](std::size_t k) { return phi[k]; });
  r.phi_min = *std::min_element(phi.begin(), phi.end());
  r.phi_max = *std::max_element(phi.begin(), phi.end());

  const int orders = std::max(2, std::min(sobolev_max_n, kMaxSobolevOrder));
  const PeriodicField gf(std::vector<double>(g.begin(), g.end()));
  PeriodicField current(std::vector<double>(phi.begin(), phi.end()));
  std::array<std::vector<double>, kMaxSobolevOrder + 1> derivs;
  derivs[0].assign(phi.begin(), phi.end());
  for (int order = 1; order <= orders; ++order) {
    current = xi_derivative(current, gf, 1);
    derivs[order].assign(current.values().begin(), current.values().end());
    const auto& d = derivs[order];
    const double h = integrate([&](std::size_t k) { return d[k] * d[k]; });
    if (order <= sobolev_max_n) r.sobolev[order - 1] = h;
    if (order == 1) r.h1 = h;
    if (order == 2) r.h2 = h;
  }

  const auto& d1 = derivs[1];
  const double phi4 = integrate([&](std::size_t k) { return phi[k] * phi[k] * phi[k] * phi[k]; });
  const double phi2_d1 = integrate([&](std::size_t k) { return phi[k] * phi[k] * d1[k] * d1[k]; });
  r.energy_rate_model = -r.h1 - 0.5 * phi4 + 4.0 * r.E;
  r.h1_rate_model = -r.h2 + 4.0 * r.h1 - 3.5 * phi2_d1;
  return r;
}

void fill_identity_residuals(std::vector<DiagnosticsRecord>& records) {
  const std::size_t m = records.size();
  // Five-point centered difference on the (uniform) record spacing.
  auto rate = [&](std::size_t i, auto&& value) {
    const double h = (records[i + 2].t - records[i - 2].t) / 4.0;
    return (value(records[i - 2]) - 8.0 * value(records[i - 1]) + 8.0 * value(records[i + 1]) -
            value(records[i + 2])) /
           (12.0 * h);
  };
  for (std::size_t i = 2; i + 2 < m; ++i) {
    DiagnosticsRecord& r = records[i];
    const double e_rate = rate(i, [](const DiagnosticsRecord& x) { return x.E; });
    const double h1_rate = rate(i, [](const DiagnosticsRecord& x) { return x.h1; });
    r.energy_identity_residual = std::abs(e_rate - r.energy_rate_model) / (r.h1 + r.E + 1.0);
    r.h1_identity_residual = std::abs(h1_rate - r.h1_rate_model) / (r.h2 + r.h1 + 1.0);
  }
}

long step_count(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
  if (!(t_end > t0)) fail(ErrorKind::InvalidInput, "t_end must exceed the current time");
  return std::max(1L, std::lround((t_end - t0) / dt));
}

}  // namespace caflow
