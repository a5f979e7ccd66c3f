#include "caflow/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "caflow/error.hpp"
#include "caflow/flow_curvature.hpp"
#include "caflow/parallel.hpp"
#include "caflow/spectral.hpp"

namespace caflow {
namespace {

void require_star_shaped(std::span<const double> sigma_density) {
  if (!has_strict_sign(sigma_density)) fail(ErrorKind::NotStarShaped, "[C, C_p] vanishes or changes sign");
}

struct SigmaFrame {
  std::vector<double> s;        // [C, C_p]
  std::vector<Vec2> c_sigma;    // C_p / s
  std::vector<Vec2> c_sigma2;   // (C_pp − (s_p/s) C_p) / s²
};

SigmaFrame sigma_frame(const ClosedCurve& curve, const CurveJet& j) {
  SigmaFrame f;
  f.s = bracket_field(curve.samples(), j.d1);
  require_star_shaped(f.s);
  const std::size_t n = curve.size();
  f.c_sigma.resize(n);
  f.c_sigma2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = f.s[k];
    const double s_p = bracket(curve[k], j.d2[k]);  // d/dp [C, C_p]
    f.c_sigma[k] = j.d1[k] / s;
    f.c_sigma2[k] = (j.d2[k] - (s_p / s) * j.d1[k]) / (s * s);
  }
  return f;
}

}  // namespace

EquiaffineInvariants centro_equiaffine(const ClosedCurve& curve) {
  const CurveJet j = jet(curve);
  SigmaFrame f = sigma_frame(curve, j);
  std::vector<double> mu = bracket_field(f.c_sigma, f.c_sigma2);
  return {PeriodicField(std::move(f.s)), PeriodicField(std::move(mu))};
}

double equiaffine_relation_residual(const ClosedCurve& curve) {
  const CurveJet j = jet(curve);
  const SigmaFrame f = sigma_frame(curve, j);
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double mu = bracket(f.c_sigma[k], f.c_sigma2[k]);
    worst = std::max(worst, norm(mu * curve[k] + f.c_sigma2[k]));
  }
  return worst;
}

MetricCurvature metric_and_curvature(const ClosedCurve& curve, const CurveJet& j) {
  const std::size_t n = curve.size();
  const std::vector<double> s = bracket_field(curve.samples(), j.d1);
  require_star_shaped(s);
  const std::vector<double> q = bracket_field(j.d1, j.d2);
  const std::vector<double> c_cpp = bracket_field(curve.samples(), j.d2);
  const std::vector<double> cp_cppp = bracket_field(j.d1, j.d3);

  std::vector<double> ratio(n);
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ratio[k] = q[k] / s[k];
    scale = std::max(scale, std::abs(ratio[k]));
  }
  int positive = 0, negative = 0;
  for (double r : ratio) {
    if (std::abs(r) <= 1e-12 * scale) fail(ErrorKind::DegenerateMetric, "[C_p, C_pp]/[C, C_p] vanishes");
    (r > 0.0 ? positive : negative)++;
  }
  if (positive > 0 && negative > 0) fail(ErrorKind::NonConstantSign, "sign of [C_p, C_pp]/[C, C_p] varies");

  MetricCurvature out;
  out.epsilon = positive > 0 ? 1 : -1;
  out.g.resize(n);
  out.phi.resize(n);
  const double eps = out.epsilon;
#pragma omp parallel for if (n >= parallel::kGrain)
  for (std::size_t k = 0; k < n; ++k) {
    const double radicand = eps * ratio[k];
    out.g[k] = std::sqrt(radicand);
    out.phi[k] = (1.0 / out.g[k]) * (1.5 * c_cpp[k] / s[k] - 0.5 * cp_cppp[k] / q[k]);
  }
  return out;
}

InvariantField centro_affine(const ClosedCurve& curve) {
  const CurveJet j = jet(curve);
  MetricCurvature mc = metric_and_curvature(curve, j);
  SigmaFrame f = sigma_frame(curve, j);
  std::vector<double> mu = bracket_field(f.c_sigma, f.c_sigma2);
  std::vector<double> xi = spectral::cumulative_integral(mc.g, 0);

  InvariantField field;
  field.epsilon = mc.epsilon;
  field.sigma_density = PeriodicField(std::move(f.s));
  field.mu = PeriodicField(std::move(mu));
  field.g = PeriodicField(std::move(mc.g));
  field.xi = PeriodicField(std::move(xi));
  field.phi = PeriodicField(std::move(mc.phi));
  return field;
}

PeriodicField phi_from_mu(const ClosedCurve& curve) {
  const EquiaffineInvariants eq = centro_equiaffine(curve);
  const std::span<const double> mu = eq.mu.values();
  for (double m : mu) {
    if (!(m > 0.0)) fail(ErrorKind::DegenerateMetric, "centro-equiaffine curvature is not positive");
  }
  const std::vector<double> mu_p = spectral::derivative(mu, 1);
  std::vector<double> phi(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double mu_sigma = mu_p[k] / std::abs(eq.sigma_density[k]);
    phi[k] = -0.5 * std::pow(mu[k], -1.5) * mu_sigma;
  }
  return PeriodicField(std::move(phi));
}

double perimeter(const InvariantField& field) { return periodic_integral(field.g); }

double energy(const InvariantField& field) { return sobolev_norm(field, 0); }

double sobolev_norm(const InvariantField& field, int n) {
  if (n < 0) fail(ErrorKind::InvalidInput, "Sobolev order must be >= 0");
  const PeriodicField d = n == 0 ? field.phi : xi_derivative(field.phi, field.g, n);
  std::vector<double> density(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) density[k] = d[k] * d[k] * field.g[k];
  return periodic_integral(density);
}

double curvature_mean(const InvariantField& field) {
  std::vector<double> density(field.phi.size());
  for (std::size_t k = 0; k < density.size(); ++k) density[k] = field.phi[k] * field.g[k];
  return periodic_integral(density);
}

}  // namespace caflow
