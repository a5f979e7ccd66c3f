#pragma once

// Centro-equiaffine (σ, μ) and centro-affine (ε, g, ξ, φ) invariants of a
// sampled closed curve, and the global quantities built from them.

#include <vector>

#include "caflow/curve.hpp"

namespace caflow {

struct EquiaffineInvariants {
  PeriodicField sigma_density;  // dσ/dp = [C, C_p]
  PeriodicField mu;             // [C_σ, C_σσ]
};

struct InvariantField {
  int epsilon = 1;
  PeriodicField sigma_density;
  PeriodicField mu;
  PeriodicField g;    // dξ/dp
  PeriodicField xi;   // ξ(p) = ∫_0^p g
  PeriodicField phi;  // centro-affine curvature
};

EquiaffineInvariants centro_equiaffine(const ClosedCurve& curve);

/// max_k |μ C + C_σσ| at the nodes.
double equiaffine_relation_residual(const ClosedCurve& curve);

InvariantField centro_affine(const ClosedCurve& curve);

// Metric and curvature only; the hot path of the curve flow.
struct MetricCurvature {
  int epsilon = 1;
  std::vector<double> g;
  std::vector<double> phi;
};
MetricCurvature metric_and_curvature(const ClosedCurve& curve, const CurveJet& jet);

/// φ through the centro-equiaffine curvature: φ = −½ μ^{−3/2} μ_σ (ε = 1).
///
/// μ_σ is taken along the sampling direction, μ_σ = μ_p / |dσ/dp|, so the
/// result is comparable with centro_affine() for either orientation.
PeriodicField phi_from_mu(const ClosedCurve& curve);

double perimeter(const InvariantField& field);
double energy(const InvariantField& field);
/// ∮ (∂^n φ/∂ξ^n)² dξ; n = 0 is the energy.
double sobolev_norm(const InvariantField& field, int n);
/// ∮ φ dξ
double curvature_mean(const InvariantField& field);

}  // namespace caflow
