#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "caflow/curve.hpp"

namespace caflow {

inline constexpr int kMaxSobolevOrder = 4;

/// One sampled point of a trajectory.
struct DiagnosticsRecord {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  double t = 0.0;
  double L = 0.0;
  double E = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double mean_phi = 0.0;                          // ∮ φ dξ
  std::array<double, kMaxSobolevOrder> sobolev{};  // ∮ φ_{ξ^n}² dξ, n = 1..4; NaN when not recorded
  double energy_identity_residual = kNaN;         // filled for interior records
  double h1_identity_residual = kNaN;
  double area = kNaN;                             // Euclidean area; NaN for the scalar flow

  // Right-hand sides of the exact identities, evaluated at this record:
  //   dE/dt      = −∮φ_ξ² − ½∮φ⁴ + 4E
  //   d/dt ∮φ_ξ² = −∮φ_ξξ² + 4∮φ_ξ² − (7/2)∮φ²φ_ξ²
  double energy_rate_model = 0.0;
  double h1_rate_model = 0.0;
  double h1 = 0.0;  // ∮φ_ξ², always evaluated
  double h2 = 0.0;  // ∮φ_ξξ², always evaluated
};

struct Snapshot {
  double t = 0.0;
  PeriodicField g;
  PeriodicField phi;
  std::optional<ClosedCurve> curve;
};

struct RecordOptions {
  int stride = 1;
  int sobolev_max_n = kMaxSobolevOrder;
  int snapshot_stride = 0;  // in steps; 0 = initial and final only
  std::function<void(const DiagnosticsRecord&)> observer;
};

struct FlowTrajectory {
  double dt = 0.0;
  int stride = 1;
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
};

/// Evaluates a record from the metric and curvature on the parameter grid.
DiagnosticsRecord measure(double t, std::span<const double> g, std::span<const double> phi, int sobolev_max_n);

/// Fills the identity residual columns from five-point centered differences
/// of the recorded E and H1 series. The two records at each end keep NaN.
///
/// energy residual = |ΔE/Δt − model| / (H1 + E + 1)
/// h1 residual     = |ΔH1/Δt − model| / (H2 + H1 + 1)
void fill_identity_residuals(std::vector<DiagnosticsRecord>& records);

/// Number of integration steps covering [t0, t_end] at step dt.
long step_count(double t0, double t_end, double dt);

}  // namespace caflow
