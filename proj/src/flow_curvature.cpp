#include "caflow/flow_curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "caflow/error.hpp"
#include "caflow/parallel.hpp"
#include "caflow/spectral.hpp"

namespace caflow {
namespace {

void require_positive_metric(std::span<const double> g) {
  for (double v : g) {
    if (!(v > 0.0)) fail(ErrorKind::DegenerateMetric, "metric g is not positive");
  }
}

std::vector<double> xi_derivative_raw(std::vector<double> f, std::span<const double> g, int order) {
  for (int i = 0; i < order; ++i) {
    f = spectral::derivative(f, 1);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] /= g[k];
  }
  return f;
}

// y + h·k, elementwise.
std::vector<double> axpy(std::span<const double> y, double h, std::span<const double> k) {
  const std::size_t n = y.size();
  std::vector<double> out(n);
#pragma omp parallel for if (n >= parallel::kGrain)
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + h * k[i];
  return out;
}

struct RawRates {
  std::vector<double> g_dot, phi_dot;
};

RawRates raw_rhs(std::span<const double> g, std::span<const double> phi, bool dealias) {
  require_positive_metric(g);
  const std::size_t n = g.size();
  const std::vector<double> lap = xi_derivative_raw(std::vector<double>(phi.begin(), phi.end()), g, 2);
  const std::vector<double> nl = dealias ? spectral::two_thirds_filter(phi) : std::vector<double>(phi.begin(), phi.end());
  RawRates r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double p2 = nl[k] * nl[k];
    r.g_dot[k] = 0.5 * p2 * g[k];
    r.phi_dot[k] = 0.5 * lap[k] - 0.5 * p2 * nl[k] + 2.0 * phi[k];
  }
  return r;
}

}  // namespace

CurvatureFlowState initial_curvature_state(const InvariantField& field, double t0) {
  return {t0, field.g, field.phi};
}

PeriodicField xi_derivative(const PeriodicField& field, const PeriodicField& g, int order) {
  if (order < 1) fail(ErrorKind::InvalidInput, "xi derivative order must be >= 1");
  if (field.size() != g.size()) fail(ErrorKind::InvalidInput, "field and metric grid sizes differ");
  require_positive_metric(g.values());
  return PeriodicField(xi_derivative_raw(std::vector<double>(field.values().begin(), field.values().end()), g.values(), order));
}

CurvatureRates rhs(const CurvatureFlowState& state, const CurvatureFlowOptions& options) {
  RawRates r = raw_rhs(state.g.values(), state.phi.values(), options.dealias);
  return {PeriodicField(std::move(r.g_dot)), PeriodicField(std::move(r.phi_dot))};
}

double max_stable_dt(const PeriodicField& g, double cfl) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(g.size());
  const double spacing = g.min() * h;
  return cfl * spacing * spacing;
}

CurvatureFlowState step(const CurvatureFlowState& state, double dt, const CurvatureFlowOptions& options) {
  try {
    if (!(dt > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
    require_positive_metric(state.g.values());
    const double limit = max_stable_dt(state.g, options.cfl);
    if (dt > limit) {
      std::ostringstream os;
      os.precision(6);
      os << "dt=" << dt << " exceeds the explicit stability bound " << limit;
      fail(ErrorKind::StabilityViolation, os.str());
    }

    const std::span<const double> g = state.g.values();
    const std::span<const double> phi = state.phi.values();
    const RawRates k1 = raw_rhs(g, phi, options.dealias);
    const RawRates k2 = raw_rhs(axpy(g, 0.5 * dt, k1.g_dot), axpy(phi, 0.5 * dt, k1.phi_dot), options.dealias);
    const RawRates k3 = raw_rhs(axpy(g, 0.5 * dt, k2.g_dot), axpy(phi, 0.5 * dt, k2.phi_dot), options.dealias);
    const RawRates k4 = raw_rhs(axpy(g, dt, k3.g_dot), axpy(phi, dt, k3.phi_dot), options.dealias);

    const std::size_t n = g.size();
    std::vector<double> g_next(n), phi_next(n);
    for (std::size_t i = 0; i < n; ++i) {
      g_next[i] = g[i] + dt / 6.0 * (k1.g_dot[i] + 2.0 * k2.g_dot[i] + 2.0 * k3.g_dot[i] + k4.g_dot[i]);
      phi_next[i] = phi[i] + dt / 6.0 * (k1.phi_dot[i] + 2.0 * k2.phi_dot[i] + 2.0 * k3.phi_dot[i] + k4.phi_dot[i]);
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(phi_next[i]) || !std::isfinite(g_next[i])) fail(ErrorKind::BlowUp, "non-finite state");
      peak = std::max(peak, std::abs(phi_next[i]));
    }
    if (peak > options.blowup_ceiling) fail(ErrorKind::BlowUp, "max |phi| exceeded the blow-up ceiling");
    require_positive_metric(g_next);
    return {state.t + dt, PeriodicField(std::move(g_next)), PeriodicField(std::move(phi_next))};
  } catch (const FlowError&) {
    throw;
  } catch (const Error& e) {
    throw FlowError(e.kind(), state.t, e.detail());
  }
}

FlowTrajectory evolve(const CurvatureFlowState& state, double t_end, double dt, const RecordOptions& record,
                      const CurvatureFlowOptions& options) {
  if (record.stride < 1) fail(ErrorKind::InvalidInput, "record stride must be >= 1");
  const long steps = step_count(state.t, t_end, dt);
  const double t0 = state.t;

  FlowTrajectory traj;
  traj.dt = dt;
  traj.stride = record.stride;
  auto observe = [&](const CurvatureFlowState& s) {
    DiagnosticsRecord r = measure(s.t, s.g.values(), s.phi.values(), record.sobolev_max_n);
    if (record.observer) record.observer(r);
    traj.records.push_back(std::move(r));
  };
  auto snapshot = [&](const CurvatureFlowState& s) { traj.snapshots.push_back({s.t, s.g, s.phi, std::nullopt}); };

  CurvatureFlowState current = state;
  observe(current);
  snapshot(current);
  for (long i = 1; i <= steps; ++i) {
    current = step(current, dt, options);
    current.t = t0 + static_cast<double>(i) * dt;
    if (i % record.stride == 0) observe(current);
    if (record.snapshot_stride > 0 && i % record.snapshot_stride == 0 && i != steps) snapshot(current);
  }
  snapshot(current);
  fill_identity_residuals(traj.records);
  return traj;
}

}  // namespace caflow
