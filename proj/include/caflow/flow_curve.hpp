#pragma once

// ∂C/∂t = (λ + ∫_0^{ξ(p)} φ dξ) C + (φ/2) C_ξ on the fixed parameter grid.

#include <string>
#include <vector>

#include "caflow/curve.hpp"
#include "caflow/flow_curvature.hpp"
#include "caflow/invariants.hpp"
#include "caflow/trajectory.hpp"

namespace caflow {

enum class Normalization { none, unit_area_scale };

const char* to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

struct CurveFlowState {
  double t = 0.0;
  ClosedCurve curve;
  double lambda = 0.0;
  Normalization normalization = Normalization::unit_area_scale;
};

struct CurveFlowOptions {
  // 2/3-rule truncation of the tangential coefficient φ/(2g). Without it a
  // normal perturbation near the cutoff drives tangential motion at rate k³
  // that the grid cannot represent as a reparametrization, and RK4 diverges
  // unless dt shrinks like N⁻³.
  bool dealias = true;
  double cfl = 0.5;
  double blowup_ceiling = 10.0;        // max |φ|
  double coordinate_ceiling = 1e100;   // max |C| when not normalizing
};

/// λ + ∫_{p_base}^{p_k} φ g dp, base node 0 unless given.
PeriodicField nonlocal_potential(const InvariantField& field, double lambda, std::size_t base_node = 0);

std::vector<Vec2> rhs(const CurveFlowState& state, const CurveFlowOptions& options = {});

/// RK4 step of the sampled curve, then rescaling to area π under unit_area_scale.
CurveFlowState step(const CurveFlowState& state, double dt, const CurveFlowOptions& options = {});

/// Records diagnostics (including Euclidean area) every stride; snapshots carry the curve.
FlowTrajectory evolve(const CurveFlowState& state, double t_end, double dt, const RecordOptions& record = {},
                      const CurveFlowOptions& options = {});

struct ConsistencyOptions {
  double lambda = 0.0;
  Normalization normalization = Normalization::unit_area_scale;
  int stride = 10;
  CurvatureFlowOptions curvature;
  CurveFlowOptions curve;
};

struct ConsistencyResult {
  double max_difference = 0.0;  // sup over compared times of sup_k |φ_curve − φ_scalar|
  std::vector<double> times;
  std::vector<double> differences;
};

/// Runs both flows from curve0 on one schedule and compares φ every stride.
ConsistencyResult consistency_check(const ClosedCurve& curve0, double t_end, double dt,
                                    const ConsistencyOptions& options = {});

}  // namespace caflow
