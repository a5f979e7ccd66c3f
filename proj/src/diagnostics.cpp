#include "caflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "caflow/error.hpp"
#include "caflow/flow_curvature.hpp"

namespace caflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Verdict make(std::string name, double measured, double bound, double tolerance, bool passed, std::string context) {
  return Verdict{std::move(name), passed, measured, bound, tolerance, std::move(context)};
}

}  // namespace

Verdict check_mean_zero(const InvariantField& field) {
  const double L = perimeter(field);
  const double measured = std::abs(curvature_mean(field));
  const double tol = thresholds::kMeanZeroRelative * L;
  return make("mean_zero_curvature", measured, 0.0, tol, measured <= tol, "|∮φ dξ| with L=" + fmt(L));
}

Verdict check_isoperimetric(const InvariantField& field) {
  const double L = perimeter(field);
  const bool passed = L <= kTwoPi + thresholds::kIsoperimetricSlack;
  std::string context = "violated";
  if (std::abs(L - kTwoPi) <= thresholds::kIsoperimetricEquality) {
    context = "equality";
  } else if (passed) {
    context = "strict";
  }
  return make("isoperimetric", L, kTwoPi, thresholds::kIsoperimetricSlack, passed, context);
}

Verdict check_curvature_bounds(const FlowTrajectory& traj, double phi0_min, double phi0_max) {
  const double lower = std::min(-2.0, phi0_min);
  const double upper = std::max(2.0, phi0_max);
  double excursion = -std::numeric_limits<double>::infinity();
  for (const DiagnosticsRecord& r : traj.records) {
    excursion = std::max({excursion, r.phi_max - upper, lower - r.phi_min});
  }
  if (traj.records.empty()) excursion = 0.0;
  const double tol = thresholds::kCurvatureBoundSlack;
  return make("curvature_bounds", excursion, 0.0, tol, excursion <= tol,
              "distance outside [" + fmt(lower) + ", " + fmt(upper) + "]");
}

std::pair<Verdict, Verdict> check_energy_identities(const FlowTrajectory& traj) {
  if (traj.records.size() < thresholds::kMinIdentityRecords) {
    fail(ErrorKind::InsufficientStride, "identity checks need at least 5 records");
  }
  double e_worst = 0.0, h_worst = 0.0;
  for (std::size_t i = 2; i + 2 < traj.records.size(); ++i) {
    const DiagnosticsRecord& r = traj.records[i];
    e_worst = std::max(e_worst, r.energy_identity_residual);
    h_worst = std::max(h_worst, r.h1_identity_residual);
  }
  const double tol = thresholds::kIdentityResidual;
  return {make("energy_identity", e_worst, 0.0, tol, e_worst <= tol,
               "max |dE/dt + ∮φ_ξ² + ½∮φ⁴ − 4E| / (∮φ_ξ² + E + 1)"),
          make("h1_identity", h_worst, 0.0, tol, h_worst <= tol,
               "max |d∮φ_ξ²/dt + ∮φ_ξξ² − 4∮φ_ξ² + 7/2∮φ²φ_ξ²| / (∮φ_ξξ² + ∮φ_ξ² + 1)")};
}

double integrated_energy(const FlowTrajectory& traj) {
  double total = 0.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const DiagnosticsRecord& a = traj.records[i - 1];
    const DiagnosticsRecord& b = traj.records[i];
    total += 0.5 * (a.E + b.E) * (b.t - a.t);
  }
  return total;
}

std::pair<Verdict, Verdict> check_monotone_L_and_integralE(const FlowTrajectory& traj) {
  double worst_drop = 0.0;
  double worst_trapezoid = 0.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const DiagnosticsRecord& a = traj.records[i - 1];
    const DiagnosticsRecord& b = traj.records[i];
    worst_drop = std::max(worst_drop, (a.L - b.L) / a.L);
    // E = 2 dL/dt integrated by the trapezoid rule over [t_i, t_{i+1}].
    const double mean_e = 0.5 * (a.E + b.E);
    const double rate = 2.0 * (b.L - a.L) / (b.t - a.t);
    worst_trapezoid = std::max(worst_trapezoid, std::abs(rate - mean_e) / (mean_e + 1.0));
  }
  const bool monotone = worst_drop <= thresholds::kMonotoneRoundoff;
  const bool consistent = worst_trapezoid <= thresholds::kTrapezoidResidual;
  Verdict first = make("monotone_perimeter", worst_trapezoid, 0.0, thresholds::kTrapezoidResidual,
                       monotone && consistent,
                       "max relative drop of L " + fmt(worst_drop) + "; measured is the E = 2 dL/dt trapezoid residual");
  const double integral = integrated_energy(traj);
  Verdict second = make("integrated_energy", integral, 4.0 * std::numbers::pi, thresholds::kIntegralEnergySlack,
                        integral <= 4.0 * std::numbers::pi + thresholds::kIntegralEnergySlack,
                        "trapezoid ∫E dt over [" + fmt(traj.records.empty() ? 0.0 : traj.records.front().t) + ", " +
                            fmt(traj.records.empty() ? 0.0 : traj.records.back().t) + "]");
  return {first, second};
}

Verdict check_sobolev_boundedness(const FlowTrajectory& traj) {
  if (traj.records.empty()) return make("sobolev_boundedness", 0.0, thresholds::kSobolevGrowth, 0.0, true, "empty");
  const double t0 = traj.records.front().t;
  std::array<double, kMaxSobolevOrder> early{};
  for (const DiagnosticsRecord& r : traj.records) {
    if (r.t - t0 > 1.0 + 1e-12) break;
    for (int n = 0; n < kMaxSobolevOrder; ++n) {
      if (std::isfinite(r.sobolev[n])) early[n] = std::max(early[n], r.sobolev[n]);
    }
  }
  double worst = 0.0;
  for (const DiagnosticsRecord& r : traj.records) {
    for (int n = 0; n < kMaxSobolevOrder; ++n) {
      if (!std::isfinite(r.sobolev[n]) || early[n] == 0.0) continue;
      worst = std::max(worst, r.sobolev[n] / early[n]);
    }
  }
  return make("sobolev_boundedness", worst, thresholds::kSobolevGrowth, 0.0, worst <= thresholds::kSobolevGrowth,
              "max ratio of ∮φ_{ξ^n}² to its maximum over the first unit of time");
}

EllipseFit fit_origin_ellipse(const ClosedCurve& curve) {
  // Normal equations for (q11, q12, q22) with basis (x², 2xy, y²).
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  for (const Vec2& c : curve.samples()) {
    const std::array<double, 3> basis{c.x * c.x, 2.0 * c.x * c.y, c.y * c.y};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += basis[i];
      for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
    }
  }
  auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det3(m);
  EllipseFit fit;
  if (d == 0.0 || !std::isfinite(d)) {
    fit.residual = std::numeric_limits<double>::infinity();
    return fit;
  }
  std::array<double, 3> q{};
  for (int col = 0; col < 3; ++col) {
    auto a = m;
    for (int row = 0; row < 3; ++row) a[row][col] = rhs[row];
    q[col] = det3(a) / d;
  }
  fit.q11 = q[0];
  fit.q12 = q[1];
  fit.q22 = q[2];
  fit.positive_definite = fit.q11 > 0.0 && fit.q11 * fit.q22 - fit.q12 * fit.q12 > 0.0;
  for (const Vec2& c : curve.samples()) {
    const double value = fit.q11 * c.x * c.x + 2.0 * fit.q12 * c.x * c.y + fit.q22 * c.y * c.y;
    fit.residual = std::max(fit.residual, std::abs(value - 1.0));
  }
  return fit;
}

Verdict check_convergence_to_ellipse(const FlowTrajectory& traj, const ClosedCurve& final_curve) {
  if (traj.records.empty()) fail(ErrorKind::InvalidInput, "empty trajectory");
  const DiagnosticsRecord& last = traj.records.back();
  const double phi_sup = std::max(std::abs(last.phi_min), std::abs(last.phi_max));
  const double l_gap = std::abs(last.L - kTwoPi);
  const EllipseFit fit = fit_origin_ellipse(final_curve);
  const bool passed = phi_sup <= thresholds::kFinalPhi && l_gap <= thresholds::kFinalPerimeter &&
                      fit.positive_definite && fit.residual <= thresholds::kEllipseFit;
  return make("convergence_to_ellipse", phi_sup, 0.0, thresholds::kFinalPhi, passed,
              "t=" + fmt(last.t) + " |L-2pi|=" + fmt(l_gap) + " fit_residual=" + fmt(fit.residual) +
                  (fit.positive_definite ? "" : " (fit not positive definite)"));
}

ClosedCurve explicit_ellipse_family(double a0, double b0, double t, std::size_t n) {
  if (!(a0 > 0.0 && b0 > 0.0)) fail(ErrorKind::InvalidInput, "family axes must be positive");
  const double scale = std::pow(a0 * b0, 0.5 * std::expm1(2.0 * t));
  return ClosedCurve::sample(
      n, [&](double p) { return Vec2{scale * a0 * std::cos(p), scale * b0 * std::sin(p)}; },
      "explicit_family(" + fmt(a0) + "," + fmt(b0) + ",t=" + fmt(t) + ")");
}

double explicit_family_area(double a0, double b0, double t) {
  return std::numbers::pi * std::pow(a0 * b0, std::exp(2.0 * t));
}

Verdict check_backward_limit_on_family(double a0, double b0, std::span<const double> t_list, std::size_t n) {
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    if (!(t_list[i] < t_list[i - 1])) fail(ErrorKind::InvalidInput, "t_list must be strictly decreasing");
  }
  const bool static_family = std::abs(a0 * b0 - 1.0) <= 1e-15;
  double worst_phi = 0.0;
  double worst_area = 0.0;
  bool monotone = true;
  bool time_independent = true;
  double previous_gap = std::numeric_limits<double>::infinity();
  std::optional<ClosedCurve> first;

  for (double t : t_list) {
    const ClosedCurve c = explicit_ellipse_family(a0, b0, t, n);
    const InvariantField f = centro_affine(c);
    worst_phi = std::max(worst_phi, f.phi.max_abs());
    for (int order = 1; order <= 2; ++order) worst_phi = std::max(worst_phi, xi_derivative(f.phi, f.g, order).max_abs());

    const double area = enclosed_area(c);
    worst_area = std::max(worst_area, std::abs(area - explicit_family_area(a0, b0, t)));
    const double gap = std::abs(area - std::numbers::pi);
    if (static_family) {
      if (gap > thresholds::kFamilyArea) monotone = false;
    } else if (!(gap < previous_gap)) {
      monotone = false;
    }
    previous_gap = gap;

    if (!first) {
      first = c;
    } else if (static_family) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (norm(c[k] - (*first)[k]) > 1e-12) time_independent = false;
      }
    }
  }

  const bool passed = worst_phi <= thresholds::kFamilyPhi && worst_area <= thresholds::kFamilyArea && monotone &&
                      time_independent;
  std::string context = "explicit ellipse family witness (φ ≡ 0 for all t); max area error " + fmt(worst_area) +
                        (monotone ? "; areas approach pi monotonically" : "; areas NOT monotone toward pi");
  if (static_family) context += time_independent ? "; static" : "; NOT static";
  return make("backward_limit_family", worst_phi, 0.0, thresholds::kFamilyPhi, passed, context);
}

}  // namespace caflow
