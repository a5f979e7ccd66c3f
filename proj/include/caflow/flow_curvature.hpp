#pragma once

// The scalar system on the fixed parameter grid, with ∂_ξ = (1/g)∂_p:
//
//   g_t = ½ φ² g
//   φ_t = ½ φ_ξξ − ½ φ³ + 2φ

#include "caflow/curve.hpp"
#include "caflow/invariants.hpp"
#include "caflow/trajectory.hpp"

namespace caflow {

struct CurvatureFlowState {
  double t = 0.0;
  PeriodicField g;
  PeriodicField phi;

  std::size_t size() const noexcept { return g.size(); }
};

CurvatureFlowState initial_curvature_state(const InvariantField& field, double t0 = 0.0);

struct CurvatureFlowOptions {
  bool dealias = true;           // 2/3-rule truncation of φ inside the nonlinear products
  double cfl = 0.5;
  double blowup_ceiling = 10.0;  // max |φ|
};

/// Applies f ↦ f_p / g `order` times.
PeriodicField xi_derivative(const PeriodicField& field, const PeriodicField& g, int order);

struct CurvatureRates {
  PeriodicField g_dot;
  PeriodicField phi_dot;
};

CurvatureRates rhs(const CurvatureFlowState& state, const CurvatureFlowOptions& options = {});

/// Explicit diffusion limit cfl · min_k (g_k · 2π/N)².
double max_stable_dt(const PeriodicField& g, double cfl);

/// One classical RK4 step. Throws FlowError(StabilityViolation | BlowUp | DegenerateMetric).
CurvatureFlowState step(const CurvatureFlowState& state, double dt, const CurvatureFlowOptions& options = {});

/// Steps to t_end, recording diagnostics every `record.stride` steps
/// (including the initial state): 1 + floor(steps/stride) records.
FlowTrajectory evolve(const CurvatureFlowState& state, double t_end, double dt, const RecordOptions& record = {},
                      const CurvatureFlowOptions& options = {});

}  // namespace caflow
