// caflow: command-line front end for the centro-affine curve flow library.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "caflow/cli_io.hpp"
#include "caflow/diagnostics.hpp"
#include "caflow/error.hpp"
#include "caflow/invariants.hpp"

namespace fs = std::filesystem;
using namespace caflow;

namespace {

void print_verdicts(const std::vector<Verdict>& verdicts) {
  for (const Verdict& v : verdicts) {
    std::printf("%-4s %-36s measured=%-12.6g bound=%-10.6g tol=%-9.3g %s\n", v.passed ? "ok" : "FAIL", v.name.c_str(),
                v.measured, v.bound, v.tolerance, v.context.c_str());
  }
}

int exit_for(const std::vector<Verdict>& verdicts) {
  for (const Verdict& v : verdicts) {
    if (!v.passed) return 2;
  }
  return 0;
}

int cmd_invariants(const fs::path& path) {
  const ClosedCurve curve = read_curve_json(path);
  const InvariantField f = centro_affine(curve);
  std::printf("curve    %s (N=%zu)\n", curve.name().c_str(), curve.size());
  std::printf("epsilon  %d\n", f.epsilon);
  std::printf("L        %.17g\n", perimeter(f));
  std::printf("E        %.17g\n", energy(f));
  std::printf("phi_min  %.17g\n", f.phi.min());
  std::printf("phi_max  %.17g\n", f.phi.max());
  std::printf("area     %.17g\n", enclosed_area(curve));
  const std::vector<Verdict> verdicts{check_mean_zero(f), check_isoperimetric(f)};
  print_verdicts(verdicts);
  return exit_for(verdicts);
}

int cmd_run(const fs::path& config_path, RunMode mode) {
  const ScenarioConfig config = load_config(config_path);
  const ScenarioOutcome outcome = run_scenario(config, mode);
  print_verdicts(outcome.verdicts);
  if (outcome.failure) {
    std::fprintf(stderr, "%s flow failed: %s: %s\n", outcome.failure->flow.c_str(), to_string(outcome.failure->kind),
                 outcome.failure->message.c_str());
  }
  return outcome.exit_code;
}

int cmd_family(double a0, double b0, const std::vector<double>& times, std::size_t n) {
  for (double t : times) {
    const ClosedCurve c = explicit_ellipse_family(a0, b0, t, n);
    std::printf("t=%-8g area=%.17g closed_form=%.17g\n", t, enclosed_area(c), explicit_family_area(a0, b0, t));
  }
  const std::vector<Verdict> verdicts{check_backward_limit_on_family(a0, b0, times, n)};
  print_verdicts(verdicts);
  return exit_for(verdicts);
}

int cmd_export(const fs::path& config_path, const fs::path& out) {
  write_curve_json(build_curve(load_config(config_path)), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centro-affine curve flow: invariants, evolution and verdicts"};
  app.require_subcommand(0, 1);

  std::string sweep_dir;
  bool sweep_verify = false;
  app.add_option("--sweep", sweep_dir, "Run every scenario *.json in a directory")->check(CLI::ExistingDirectory);
  app.add_flag("--verify-only", sweep_verify, "With --sweep: write reports only");

  std::string curve_path;
  auto* inv = app.add_subcommand("invariants", "Invariants and static verdicts of a curve JSON file");
  inv->add_option("curve", curve_path, "Curve JSON {\"points\": [[x, y], ...]}")->required();

  std::string evolve_config;
  auto* evo = app.add_subcommand("evolve", "Run a scenario and write CSV, SVG and report");
  evo->add_option("config", evolve_config, "Scenario JSON")->required();

  std::string verify_config;
  auto* ver = app.add_subcommand("verify", "Run a scenario and write the verdict report only");
  ver->add_option("config", verify_config, "Scenario JSON")->required();

  double a0 = 1.0, b0 = 1.0;
  std::vector<double> times{0.0, -1.0, -2.0, -4.0};
  std::size_t family_n = 64;
  auto* fam = app.add_subcommand("family", "Checks on the explicit ellipse family");
  fam->add_option("--a0", a0, "Initial semi-axis a0")->required();
  fam->add_option("--b0", b0, "Initial semi-axis b0")->required();
  fam->add_option("--times", times, "Decreasing times")->delimiter(',');
  fam->add_option("-n,--samples", family_n, "Samples per curve");

  std::string export_config, export_out;
  auto* exp = app.add_subcommand("export-curve", "Write a scenario's initial curve as JSON");
  exp->add_option("config", export_config, "Scenario JSON")->required();
  exp->add_option("-o,--output", export_out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!sweep_dir.empty()) return run_sweep(sweep_dir, sweep_verify ? RunMode::verify : RunMode::evolve);
    if (*inv) return cmd_invariants(curve_path);
    if (*evo) return cmd_run(evolve_config, RunMode::evolve);
    if (*ver) return cmd_run(verify_config, RunMode::verify);
    if (*fam) return cmd_family(a0, b0, times, family_n);
    if (*exp) return cmd_export(export_config, export_out);
    std::cout << app.help();
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.kind() == ErrorKind::ConfigError ? 1 : 3;
  }
}
