// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "caflow/cli_io.hpp"
#include "caflow/diagnostics.hpp"
#include "caflow/error.hpp"
#include "caflow/flow_curvature.hpp"
#include "caflow/flow_curve.hpp"
#include "caflow/invariants.hpp"
#include "caflow/parallel.hpp"

namespace fs = std::filesystem;
using namespace caflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// N = 4096 adaptive-quadrature value of ∮ dξ for the unit circle shifted by 0.3.
constexpr double kShiftedCircleL = 6.39477943968546;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double sup_diff(const PeriodicField& a, const PeriodicField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion_1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const std::pair<double, double> axes[] = {{1.0, 1.0}, {2.0, 0.5}, {3.0, 1.0 / 3.0}};
  double phi = 0.0, l_gap = 0.0, mu = 0.0, relation = 0.0;
  for (auto [a, b] : axes) {
    const ClosedCurve c = preset(OriginEllipse{a, b}, 256);
    const InvariantField f = centro_affine(c);
    phi = std::max(phi, f.phi.max_abs());
    l_gap = std::max(l_gap, std::abs(perimeter(f) - kTwoPi));
    const double expected = std::pow(a * b, -2.0);
    for (std::size_t k = 0; k < f.mu.size(); ++k) mu = std::max(mu, std::abs(f.mu[k] - expected));
    relation = std::max(relation, equiaffine_relation_residual(c));
  }
  const double elapsed = seconds_since(t0);
  out.require(phi <= 1e-10, "max|phi|=" + num(phi));
  out.require(l_gap <= 1e-10, "|L-2pi|=" + num(l_gap));
  out.require(mu <= 1e-10, "|mu-(ab)^-2|=" + num(mu));
  out.require(relation <= 1e-8, "|mu C + C_ss|=" + num(relation));
  out.require(elapsed < 1.0, "time " + num(elapsed) + "s");
  return out;
}

Outcome criterion_2() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const InvariantField shifted = centro_affine(preset(ShiftedEllipse{1.0, 1.0, 0.3, 0.0}, 256));
  const double L = perimeter(shifted);
  out.require(L < kTwoPi, "shifted_ellipse(1,1,0.3,0) L=" + std::to_string(L) + " vs 2pi=" + std::to_string(kTwoPi));
  out.require(std::abs(L - kShiftedCircleL) <= 1e-8, "quadrature oracle match |dL|=" + num(std::abs(L - kShiftedCircleL)));

  const auto curves = parallel::random_star_convex_batch(1, 100, 256);
  const auto summaries = parallel::summarize(curves);
  int bad_l = 0, bad_mean = 0;
  double worst_l = 0.0;
  for (const auto& s : summaries) {
    if (!s.ok || s.perimeter > kTwoPi + 1e-8) ++bad_l;
    if (!s.ok || std::abs(s.mean_phi) > 1e-8 * s.perimeter) ++bad_mean;
    worst_l = std::max(worst_l, s.perimeter);
  }
  out.require(bad_l == 0, "random seeds with L > 2pi: " + std::to_string(bad_l) + " (max L " + num(worst_l) + ")");
  out.require(bad_mean == 0, "random seeds failing mean zero: " + std::to_string(bad_mean));
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 10.0, "time " + num(elapsed) + "s");
  return out;
}

Outcome criterion_3() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t n = 512;
  std::vector<ClosedCurve> curves;
  for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {3.0, 1.0 / 3.0}}) curves.push_back(preset(OriginEllipse{a, b}, n));
  curves.push_back(preset(ShiftedEllipse{1.0, 1.0, 0.3, 0.0}, n));
  curves.push_back(preset(ShiftedEllipse{1.0, 1.0, 0.5, 0.0}, n));
  curves.push_back(preset(PerturbedEllipse{1.0, 1.0, 0.05, 3}, n));
  curves.push_back(preset(PerturbedEllipse{1.0, 1.0, 0.02, 2}, n));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) curves.push_back(preset(random_star_convex(seed, n), n));
  double worst = 0.0;
  for (const ClosedCurve& c : curves) worst = std::max(worst, sup_diff(centro_affine(c).phi, phi_from_mu(c)));
  const double elapsed = seconds_since(t0);
  out.require(worst <= 1e-8, std::to_string(curves.size()) + " curves, sup|phi - phi(mu)|=" + num(worst));
  out.require(elapsed < 5.0, "time " + num(elapsed) + "s");
  return out;
}

struct ScalarRun {
  FlowTrajectory traj;
  double phi0_min = 0.0, phi0_max = 0.0;
};

ScalarRun scalar_run(double dt) {
  const InvariantField f = centro_affine(preset(PerturbedEllipse{1.0, 1.0, 0.05, 3}, 256));
  RecordOptions rec;
  rec.stride = 1;
  rec.sobolev_max_n = 2;
  return {evolve(initial_curvature_state(f), 2.0, dt, rec), f.phi.min(), f.phi.max()};
}

Outcome criteria_4_5(Outcome& c5) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const ScalarRun coarse = scalar_run(1e-4);
  const ScalarRun fine = scalar_run(5e-5);
  const auto [e1, h1] = check_energy_identities(coarse.traj);
  const auto [e2, h2] = check_energy_identities(fine.traj);
  out.require(e1.passed, "dE/dt residual " + num(e1.measured));
  out.require(h1.passed, "H1 residual " + num(h1.measured));
  out.require(e1.measured >= 4.0 * e2.measured, "dt/2 reduces dE/dt residual " + num(e1.measured / e2.measured) + "x");
  out.require(h1.measured >= 4.0 * h2.measured, "dt/2 reduces H1 residual " + num(h1.measured / h2.measured) + "x");
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 120.0, "time " + num(elapsed) + "s");

  const Verdict bounds = check_curvature_bounds(coarse.traj, coarse.phi0_min, coarse.phi0_max);
  c5.require(bounds.passed, "max excursion " + num(bounds.measured) + " outside " + bounds.context.substr(bounds.context.find('[')));
  return out;
}

Outcome criterion_6() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const ClosedCurve c0 = preset(PerturbedEllipse{1.0, 1.0, 0.05, 3}, 256);
  RecordOptions rec;
  rec.stride = 5;
  const FlowTrajectory traj = evolve(CurveFlowState{0.0, c0, 0.0, Normalization::unit_area_scale}, 8.0, 1e-4, rec);
  const ClosedCurve& final_curve = *traj.snapshots.back().curve;
  const DiagnosticsRecord& last = traj.records.back();
  const EllipseFit fit = fit_origin_ellipse(final_curve);
  const double phi_sup = std::max(std::abs(last.phi_min), std::abs(last.phi_max));
  out.require(phi_sup <= 1e-4, "final max|phi|=" + num(phi_sup));
  out.require(std::abs(last.L - kTwoPi) <= 1e-3, "|L-2pi|=" + num(std::abs(last.L - kTwoPi)));
  out.require(fit.positive_definite && fit.residual <= 1e-6, "fit residual " + num(fit.residual));
  out.require(check_convergence_to_ellipse(traj, final_curve).passed, "convergence verdict");
  double drop = 0.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) drop = std::max(drop, traj.records[i - 1].L - traj.records[i].L);
  out.require(drop <= 1e-12 * kTwoPi, "max L decrease " + num(drop));
  const auto [mono, integral] = check_monotone_L_and_integralE(traj);
  out.require(mono.passed, "E = 2 dL/dt trapezoid residual " + num(mono.measured));
  out.require(integral.passed, "int E dt=" + num(integral.measured) + " vs 4pi");
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 300.0, "time " + num(elapsed) + "s");
  return out;
}

Outcome criterion_7() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const PerturbedEllipse presets[] = {{1.0, 1.0, 0.05, 3}, {1.0, 1.0, 0.02, 2}};
  double worst = 0.0, gauge = 0.0;
  for (const PerturbedEllipse& p : presets) {
    const ClosedCurve c0 = preset(p, 256);
    std::vector<FlowTrajectory> by_lambda;
    for (double lambda : {0.0, 1.0}) {
      ConsistencyOptions opts;
      opts.lambda = lambda;
      worst = std::max(worst, consistency_check(c0, 1.0, 1e-4, opts).max_difference);
      RecordOptions rec;
      rec.stride = 1000;
      rec.snapshot_stride = 1000;
      by_lambda.push_back(evolve(CurveFlowState{0.0, c0, lambda, Normalization::unit_area_scale}, 1.0, 1e-4, rec));
    }
    for (std::size_t i = 0; i < by_lambda[0].snapshots.size(); ++i) {
      gauge = std::max(gauge, sup_diff(by_lambda[0].snapshots[i].phi, by_lambda[1].snapshots[i].phi));
    }
  }
  out.require(worst <= 1e-4, "consistency " + num(worst));
  out.require(gauge <= 1e-8, "lambda 0 vs 1 phi difference " + num(gauge));
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 300.0, "time " + num(elapsed) + "s");
  return out;
}

Outcome criterion_8() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> times{0.0, -1.0, -2.0, -4.0};
  for (auto [a0, b0] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 1.0}}) {
    const Verdict v = check_backward_limit_on_family(a0, b0, times);
    out.require(v.passed, "(" + num(a0) + "," + num(b0) + ") max|phi_(xi^n)|=" + num(v.measured));
  }
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 1.0, "time " + num(elapsed) + "s");
  return out;
}

double richardson_order(const std::function<std::vector<double>(double)>& solve) {
  const std::vector<double> a = solve(1e-3), b = solve(5e-4), c = solve(2.5e-4);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d1 = std::max(d1, std::abs(a[k] - b[k]));
    d2 = std::max(d2, std::abs(b[k] - c[k]));
  }
  return std::log2(d1 / d2);
}

Outcome criterion_9() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t n = 32;
  const ClosedCurve c0 = preset(PerturbedEllipse{1.0, 1.0, 0.05, 3}, n);
  const InvariantField f0 = centro_affine(c0);
  RecordOptions rec;
  rec.stride = 1 << 30;
  const double scalar = richardson_order([&](double dt) {
    CurvatureFlowState s = initial_curvature_state(f0);
    const long steps = step_count(0.0, 1.0, dt);
    for (long i = 0; i < steps; ++i) s = step(s, dt);
    std::vector<double> v(s.phi.values().begin(), s.phi.values().end());
    v.insert(v.end(), s.g.values().begin(), s.g.values().end());
    return v;
  });
  const double curve = richardson_order([&](double dt) {
    CurveFlowState s{0.0, c0, 0.0, Normalization::none};
    const long steps = step_count(0.0, 1.0, dt);
    for (long i = 0; i < steps; ++i) s = step(s, dt);
    std::vector<double> v = s.curve.xs();
    const std::vector<double> y = s.curve.ys();
    v.insert(v.end(), y.begin(), y.end());
    return v;
  });
  out.require(scalar >= 3.5, "scalar flow order " + num(scalar));
  out.require(curve >= 3.5, "curve flow order " + num(curve));
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 120.0, "time " + num(elapsed) + "s");
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion_10() {
  Outcome out;
  const char* dir = std::getenv("CAFLOW_SCENARIO_DIR");
  if (dir == nullptr) {
    out.require(false, "CAFLOW_SCENARIO_DIR not set");
    return out;
  }
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  const fs::path root = fs::temp_directory_path() / "caflow_acceptance_determinism";
  fs::remove_all(root);

  std::size_t files = 0, mismatches = 0;
  for (const fs::path& path : configs) {
    std::vector<std::vector<std::string>> runs;
    for (int run = 0; run < 2; ++run) {
      ScenarioConfig cfg = load_config(path);
      const fs::path out_dir = root / ("run" + std::to_string(run)) / cfg.name;
      cfg.outputs.csv = out_dir / "series.csv";
      cfg.outputs.report = out_dir / "report.json";
      cfg.outputs.svg_dir = out_dir / "svg";
      run_scenario(cfg);
      std::vector<std::string> contents;
      std::vector<fs::path> produced;
      for (const auto& e : fs::recursive_directory_iterator(out_dir)) {
        if (e.is_regular_file()) produced.push_back(e.path());
      }
      std::sort(produced.begin(), produced.end());
      for (const fs::path& p : produced) contents.push_back(p.filename().string() + "\n" + slurp(p));
      runs.push_back(std::move(contents));
    }
    files += runs[0].size();
    if (runs[0] != runs[1]) ++mismatches;
  }
  fs::remove_all(root);
  out.require(mismatches == 0 && files > 0, std::to_string(configs.size()) + " scenarios, " + std::to_string(files) +
                                                " files per run, " + std::to_string(mismatches) + " differing");
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d: %s  %s\n", id, o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };

  report(1, criterion_1);
  report(2, criterion_2);
  report(3, criterion_3);
  Outcome c5;
  report(4, [&] { return criteria_4_5(c5); });
  report(5, [&] { return c5; });
  report(6, criterion_6);
  report(7, criterion_7);
  report(8, criterion_8);
  report(9, criterion_9);
  report(10, criterion_10);
  return failures == 0 ? 0 : 1;
}
