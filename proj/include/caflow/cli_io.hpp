#pragma once

// Scenario configuration, execution and file output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "caflow/curve.hpp"
#include "caflow/diagnostics.hpp"
#include "caflow/error.hpp"
#include "caflow/flow_curve.hpp"
#include "caflow/trajectory.hpp"

namespace caflow {

enum class FlowKind { curvature, curve, both };

struct OutputConfig {
  std::filesystem::path csv;     // empty: <name>.csv in the output directory
  std::filesystem::path report;  // empty: <name>.report.json
  std::filesystem::path svg_dir;  // empty: no SVG
  int snapshot_stride = 0;       // steps between SVG snapshots; 0 = first and last
};

/// Random star preset drawn from the scenario seed.
struct RandomStar {};

using CurveSource = std::variant<PresetSpec, RandomStar, std::filesystem::path>;

struct ScenarioConfig {
  std::string name;
  CurveSource curve = OriginEllipse{};
  std::size_t n = 256;
  double dt = 1e-4;
  double t_end = 1.0;
  double lambda = 0.0;
  FlowKind flow = FlowKind::curvature;
  Normalization normalization = Normalization::unit_area_scale;
  int record_stride = 10;
  int sobolev_max_n = kMaxSobolevOrder;
  OutputConfig outputs;
  std::uint64_t seed = 0;
  bool dealias = true;
  double cfl = 0.5;
  bool check_convergence = false;
};

/// Throws Error(ConfigError) naming the line and field at fault.
/// Relative curve paths resolve against base_dir.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// CAFLOW_OUTPUT_DIR when set, otherwise the working directory.
std::filesystem::path default_output_dir();

ClosedCurve build_curve(const ScenarioConfig& config);

enum class RunMode { evolve, verify };

struct FlowFailure {
  std::string flow;
  ErrorKind kind = ErrorKind::InvalidInput;
  double time = 0.0;
  std::string message;
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0 all passed, 2 verdict failure, 3 flow error
  std::vector<Verdict> verdicts;
  std::optional<FlowFailure> failure;
};

/// Runs the flow(s) and the verdict suite and writes the report; in evolve
/// mode also the CSV and SVG outputs.
ScenarioOutcome run_scenario(const ScenarioConfig& config, RunMode mode = RunMode::evolve);

/// Loads and runs every *.json in dir (sorted), one worker per scenario.
/// Returns the largest exit code; parse failures count as 1.
int run_sweep(const std::filesystem::path& dir, RunMode mode = RunMode::evolve);

inline constexpr const char* kCsvHeader =
    "t,L,E,phi_min,phi_max,mean_phi,H1,H2,H3,H4,energy_residual,h1_residual,area";

std::string csv_text(const FlowTrajectory& traj);
void emit_csv(const FlowTrajectory& traj, const std::filesystem::path& path);

std::string svg_text(const ClosedCurve& curve, const std::optional<EllipseFit>& overlay);
void emit_svg(const ClosedCurve& curve, const std::filesystem::path& path,
              const std::optional<EllipseFit>& overlay = std::nullopt);

std::string report_text(const std::string& scenario, const std::vector<Verdict>& verdicts,
                        const std::optional<FlowFailure>& failure = std::nullopt);
void emit_report(const std::string& scenario, const std::vector<Verdict>& verdicts, const std::filesystem::path& path,
                 const std::optional<FlowFailure>& failure = std::nullopt);

/// {"name": ..., "points": [[x, y], ...]}
ClosedCurve read_curve_json(const std::filesystem::path& path);
void write_curve_json(const ClosedCurve& curve, const std::filesystem::path& path);

}  // namespace caflow
