#include "caflow/flow_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "caflow/error.hpp"
#include "caflow/parallel.hpp"
#include "caflow/spectral.hpp"

namespace caflow {

const char* to_string(Normalization n) {
  return n == Normalization::none ? "none" : "unit_area_scale";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "none") return Normalization::none;
  if (s == "unit_area_scale") return Normalization::unit_area_scale;
  fail(ErrorKind::InvalidInput, "unknown normalization '" + s + "'");
}

namespace {

std::vector<double> potential_values(std::span<const double> g, std::span<const double> phi, double lambda,
                                     std::size_t base_node) {
  std::vector<double> density(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) density[k] = phi[k] * g[k];
  std::vector<double> out = spectral::cumulative_integral(density, base_node);
  for (double& v : out) v += lambda;
  return out;
}

struct Velocity {
  std::vector<Vec2> v;
  std::vector<double> g;
  std::vector<double> phi;
};

Velocity velocity(const ClosedCurve& curve, double lambda, bool dealias) {
  const CurveJet j = jet(curve);
  MetricCurvature mc = metric_and_curvature(curve, j);
  const std::vector<double> pot = potential_values(mc.g, mc.phi, lambda, 0);
  const std::size_t n = curve.size();
  std::vector<double> beta(n);
  for (std::size_t k = 0; k < n; ++k) beta[k] = 0.5 * mc.phi[k] / mc.g[k];
  if (dealias) beta = spectral::two_thirds_filter(beta);
  std::vector<Vec2> v(n);
#pragma omp parallel for if (n >= parallel::kGrain)
  for (std::size_t k = 0; k < n; ++k) v[k] = pot[k] * curve[k] + beta[k] * j.d1[k];
  return {std::move(v), std::move(mc.g), std::move(mc.phi)};
}

ClosedCurve advance(const ClosedCurve& c, double h, const std::vector<Vec2>& k) {
  std::vector<Vec2> pts(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) pts[i] = c[i] + h * k[i];
  for (const Vec2& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorKind::BlowUp, "non-finite coordinates");
  }
  return ClosedCurve(std::move(pts), c.name());
}

double peak_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PeriodicField nonlocal_potential(const InvariantField& field, double lambda, std::size_t base_node) {
  return PeriodicField(potential_values(field.g.values(), field.phi.values(), lambda, base_node));
}

std::vector<Vec2> rhs(const CurveFlowState& state, const CurveFlowOptions& options) {
  return velocity(state.curve, state.lambda, options.dealias).v;
}

CurveFlowState step(const CurveFlowState& state, double dt, const CurveFlowOptions& options) {
  try {
    if (!(dt > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
    const Velocity k1 = velocity(state.curve, state.lambda, options.dealias);
    const double limit = max_stable_dt(PeriodicField(k1.g), options.cfl);
    if (dt > limit) {
      std::ostringstream os;
      os.precision(6);
      os << "dt=" << dt << " exceeds the explicit stability bound " << limit;
      fail(ErrorKind::StabilityViolation, os.str());
    }
    const Velocity k2 = velocity(advance(state.curve, 0.5 * dt, k1.v), state.lambda, options.dealias);
    const Velocity k3 = velocity(advance(state.curve, 0.5 * dt, k2.v), state.lambda, options.dealias);
    const Velocity k4 = velocity(advance(state.curve, dt, k3.v), state.lambda, options.dealias);

    const std::size_t n = state.curve.size();
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = state.curve[i] + (dt / 6.0) * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y)) fail(ErrorKind::BlowUp, "non-finite coordinates");
    }
    ClosedCurve next(std::move(pts), state.curve.name());

    if (state.normalization == Normalization::unit_area_scale) {
      next = next.scaled(std::sqrt(std::numbers::pi / enclosed_area(next)));
    } else {
      double extent = 0.0;
      for (const Vec2& p : next.samples()) extent = std::max(extent, norm(p));
      if (extent > options.coordinate_ceiling) fail(ErrorKind::BlowUp, "coordinates exceeded the overflow ceiling");
    }
    if (peak_abs(k4.phi) > options.blowup_ceiling) fail(ErrorKind::BlowUp, "max |phi| exceeded the blow-up ceiling");
    return {state.t + dt, std::move(next), state.lambda, state.normalization};
  } catch (const FlowError&) {
    throw;
  } catch (const Error& e) {
    throw FlowError(e.kind(), state.t, e.detail());
  }
}

FlowTrajectory evolve(const CurveFlowState& state, double t_end, double dt, const RecordOptions& record,
                      const CurveFlowOptions& options) {
  if (record.stride < 1) fail(ErrorKind::InvalidInput, "record stride must be >= 1");
  const long steps = step_count(state.t, t_end, dt);
  const double t0 = state.t;

  FlowTrajectory traj;
  traj.dt = dt;
  traj.stride = record.stride;
  auto observe = [&](const CurveFlowState& s) {
    try {
      if (!check_star_shaped(s.curve)) fail(ErrorKind::NotStarShaped, "curve lost star-shapedness");
      if (!check_convex(s.curve)) fail(ErrorKind::DegenerateMetric, "curve lost convexity");
      const MetricCurvature mc = metric_and_curvature(s.curve, jet(s.curve));
      DiagnosticsRecord r = measure(s.t, mc.g, mc.phi, record.sobolev_max_n);
      r.area = enclosed_area(s.curve);
      if (record.observer) record.observer(r);
      traj.records.push_back(std::move(r));
    } catch (const FlowError&) {
      throw;
    } catch (const Error& e) {
      throw FlowError(e.kind(), s.t, e.detail());
    }
  };
  auto snapshot = [&](const CurveFlowState& s) {
    const MetricCurvature mc = metric_and_curvature(s.curve, jet(s.curve));
    traj.snapshots.push_back({s.t, PeriodicField(mc.g), PeriodicField(mc.phi), s.curve});
  };

  CurveFlowState current = state;
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

ConsistencyResult consistency_check(const ClosedCurve& curve0, double t_end, double dt,
                                    const ConsistencyOptions& options) {
  if (options.stride < 1) fail(ErrorKind::InvalidInput, "comparison stride must be >= 1");
  const long steps = step_count(0.0, t_end, dt);
  CurveFlowState geometric{0.0, curve0, options.lambda, options.normalization};
  CurvatureFlowState scalar = initial_curvature_state(centro_affine(curve0));

  ConsistencyResult result;
  auto compare = [&](double t) {
    const MetricCurvature mc = metric_and_curvature(geometric.curve, jet(geometric.curve));
    double diff = 0.0;
    for (std::size_t k = 0; k < mc.phi.size(); ++k) diff = std::max(diff, std::abs(mc.phi[k] - scalar.phi[k]));
    result.times.push_back(t);
    result.differences.push_back(diff);
    result.max_difference = std::max(result.max_difference, diff);
  };

  compare(0.0);
  for (long i = 1; i <= steps; ++i) {
    geometric = step(geometric, dt, options.curve);
    scalar = step(scalar, dt, options.curvature);
    if (i % options.stride == 0 || i == steps) compare(static_cast<double>(i) * dt);
  }
  return result;
}

}  // namespace caflow
