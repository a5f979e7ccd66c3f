#pragma once

// Named, machine-checkable verdicts over curves and trajectories.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caflow/curve.hpp"
#include "caflow/invariants.hpp"
#include "caflow/trajectory.hpp"

namespace caflow {

struct Verdict {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string context;
};

// Thresholds. The convergence ones are calibration choices for desk-scale
// runs, not statements about asymptotic rates.
namespace thresholds {
inline constexpr double kMeanZeroRelative = 1e-8;      // × L
inline constexpr double kIsoperimetricSlack = 1e-8;
inline constexpr double kIsoperimetricEquality = 1e-10;
inline constexpr double kCurvatureBoundSlack = 1e-6;
inline constexpr double kIdentityResidual = 1e-4;
inline constexpr double kTrapezoidResidual = 1e-4;
inline constexpr double kMonotoneRoundoff = 1e-12;     // × L
inline constexpr double kIntegralEnergySlack = 1e-6;
inline constexpr double kFinalPhi = 1e-4;
inline constexpr double kFinalPerimeter = 1e-3;
inline constexpr double kEllipseFit = 1e-6;
inline constexpr double kFamilyPhi = 1e-10;
inline constexpr double kFamilyArea = 1e-10;
inline constexpr double kSobolevGrowth = 10.0;
inline constexpr std::size_t kMinIdentityRecords = 5;
}  // namespace thresholds

Verdict check_mean_zero(const InvariantField& field);

/// context is "equality" when |L − 2π| <= 1e-10, "strict" when L < 2π otherwise,
/// "violated" when L > 2π + 1e-8.
Verdict check_isoperimetric(const InvariantField& field);

Verdict check_curvature_bounds(const FlowTrajectory& traj, double phi0_min, double phi0_max);

/// {dE/dt identity, d/dt ∮φ_ξ² identity}; throws InsufficientStride below 5 records.
std::pair<Verdict, Verdict> check_energy_identities(const FlowTrajectory& traj);

/// {L nondecreasing with trapezoid consistency of E = 2 dL/dt, ∫E dt <= 4π}.
std::pair<Verdict, Verdict> check_monotone_L_and_integralE(const FlowTrajectory& traj);

/// Trapezoid accumulation of E over the recorded times.
double integrated_energy(const FlowTrajectory& traj);

/// Recorded ∮φ_{ξ^n}² never exceeds 10× its running maximum over the first unit of time.
Verdict check_sobolev_boundedness(const FlowTrajectory& traj);

/// Least-squares symmetric form Q with CᵀQC ≈ 1 over the samples.
struct EllipseFit {
  double q11 = 0.0, q12 = 0.0, q22 = 0.0;
  bool positive_definite = false;
  double residual = 0.0;  // max_k |C_kᵀ Q C_k − 1|
};
EllipseFit fit_origin_ellipse(const ClosedCurve& curve);

Verdict check_convergence_to_ellipse(const FlowTrajectory& traj, const ClosedCurve& final_curve);

/// (a0 b0)^{(e^{2t} − 1)/2} (a0 cos θ, b0 sin θ).
ClosedCurve explicit_ellipse_family(double a0, double b0, double t, std::size_t n = 64);
/// π (a0 b0)^{e^{2t}}
double explicit_family_area(double a0, double b0, double t);

/// t_list must be decreasing. Checks φ, φ_ξ, φ_ξξ vanish, the closed-form area,
/// time-independence when a0 b0 = 1, and monotone approach of the area to π.
Verdict check_backward_limit_on_family(double a0, double b0, std::span<const double> t_list, std::size_t n = 64);

}  // namespace caflow
