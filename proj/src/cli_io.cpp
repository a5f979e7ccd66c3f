#include "caflow/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "caflow/error.hpp"
#include "caflow/flow_curvature.hpp"
#include "caflow/invariants.hpp"

namespace caflow {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config reading with line/field context

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) : text_(text) {}

  [[noreturn]] void error(const std::string& field, const std::string& what) const {
    fail(ErrorKind::ConfigError, "line " + std::to_string(line_of(field)) + ", field '" + field + "': " + what);
  }

  int line_of(const std::string& field) const {
    const std::string leaf = field.substr(field.find_last_of('.') == std::string::npos ? 0 : field.find_last_of('.') + 1);
    const auto pos = text_.find("\"" + leaf + "\"");
    if (pos == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) const {
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
        error(prefix + key, "unknown field");
      }
    }
  }

  double number(const json& obj, const std::string& prefix, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) error(prefix + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) error(prefix + key, "must be finite");
    return x;
  }

  long long integer(const json& obj, const std::string& prefix, const char* key, long long fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) error(prefix + key, "expected an integer");
    return v.get<long long>();
  }

  bool boolean(const json& obj, const std::string& prefix, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) error(prefix + key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& obj, const std::string& prefix, const char* key, const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) error(prefix + key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& prefix, const char* key) const {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) error(prefix + key, "expected an array of numbers");
    for (const json& x : v) {
      if (!x.is_number()) error(prefix + key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  const std::string& text_;
};

CurveSource parse_curve(const ConfigReader& r, const json& v, const fs::path& base_dir) {
  if (v.is_string()) return base_dir / v.get<std::string>();
  if (!v.is_object()) r.error("curve", "expected a preset object or a path string");
  if (v.contains("path")) {
    r.reject_unknown(v, "curve.", {"path"});
    return base_dir / r.string(v, "curve.", "path", "");
  }
  const std::string kind = r.string(v, "curve.", "preset", "");
  if (kind == "origin_ellipse") {
    r.reject_unknown(v, "curve.", {"preset", "a", "b"});
    return PresetSpec{OriginEllipse{r.number(v, "curve.", "a", 1.0), r.number(v, "curve.", "b", 1.0)}};
  }
  if (kind == "shifted_ellipse") {
    r.reject_unknown(v, "curve.", {"preset", "a", "b", "x0", "y0"});
    return PresetSpec{ShiftedEllipse{r.number(v, "curve.", "a", 1.0), r.number(v, "curve.", "b", 1.0),
                                     r.number(v, "curve.", "x0", 0.0), r.number(v, "curve.", "y0", 0.0)}};
  }
  if (kind == "perturbed_ellipse") {
    r.reject_unknown(v, "curve.", {"preset", "a", "b", "amplitude", "mode"});
    return PresetSpec{PerturbedEllipse{r.number(v, "curve.", "a", 1.0), r.number(v, "curve.", "b", 1.0),
                                       r.number(v, "curve.", "amplitude", 0.0),
                                       static_cast<int>(r.integer(v, "curve.", "mode", 2))}};
  }
  if (kind == "star_convex") {
    r.reject_unknown(v, "curve.", {"preset", "radius", "cos", "sin"});
    return PresetSpec{StarConvex{r.number(v, "curve.", "radius", 1.0), r.numbers(v, "curve.", "cos"),
                                 r.numbers(v, "curve.", "sin")}};
  }
  if (kind == "random_star_convex") {
    r.reject_unknown(v, "curve.", {"preset"});
    return RandomStar{};
  }
  r.error("curve.preset", "unknown preset '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Formatting

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::IoError, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json verdict_json(const Verdict& v) {
  return json{{"name", v.name},           {"passed", v.passed},       {"measured", v.measured},
              {"bound", v.bound},         {"tolerance", v.tolerance}, {"context", v.context}};
}

// ---------------------------------------------------------------------------
// Scenario execution

fs::path resolve_output(const fs::path& configured, const fs::path& fallback_name) {
  const fs::path p = configured.empty() ? fallback_name : configured;
  return p.is_absolute() ? p : default_output_dir() / p;
}

void add_trajectory_verdicts(const std::string& prefix, const FlowTrajectory& traj, double phi0_min, double phi0_max,
                             std::vector<Verdict>& out) {
  auto push = [&](Verdict v) {
    v.name = prefix + v.name;
    out.push_back(std::move(v));
  };
  push(check_curvature_bounds(traj, phi0_min, phi0_max));
  if (traj.records.size() >= thresholds::kMinIdentityRecords) {
    auto [e, h] = check_energy_identities(traj);
    push(e);
    push(h);
  }
  auto [mono, integral] = check_monotone_L_and_integralE(traj);
  push(mono);
  push(integral);
  push(check_sobolev_boundedness(traj));
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  const ConfigReader r(text);
  if (!doc.is_object()) fail(ErrorKind::ConfigError, "line 1: top level must be an object");
  r.reject_unknown(doc, "",
                   {"name", "curve", "N", "dt", "t_end", "lambda", "flow", "normalization", "record_stride",
                    "sobolev_max_n", "outputs", "seed", "dealias", "cfl", "check_convergence"});

  ScenarioConfig c;
  c.name = r.string(doc, "", "name", "");
  if (c.name.empty()) r.error("name", "required non-empty string");
  if (c.name.find_first_of("/\\") != std::string::npos) r.error("name", "must not contain path separators");
  if (!doc.contains("curve")) r.error("curve", "required");
  c.curve = parse_curve(r, doc.at("curve"), base_dir);

  const long long n = r.integer(doc, "", "N", 256);
  if (n < 16 || n % 2 != 0) r.error("N", "must be even and at least 16");
  c.n = static_cast<std::size_t>(n);
  c.dt = r.number(doc, "", "dt", c.dt);
  if (!(c.dt > 0.0)) r.error("dt", "must be positive");
  c.t_end = r.number(doc, "", "t_end", c.t_end);
  if (!(c.t_end > 0.0)) r.error("t_end", "must be positive");
  c.lambda = r.number(doc, "", "lambda", c.lambda);

  const std::string flow = r.string(doc, "", "flow", "curvature");
  if (flow == "curvature") {
    c.flow = FlowKind::curvature;
  } else if (flow == "curve") {
    c.flow = FlowKind::curve;
  } else if (flow == "both") {
    c.flow = FlowKind::both;
  } else {
    r.error("flow", "expected curvature, curve or both");
  }
  try {
    c.normalization = normalization_from_string(r.string(doc, "", "normalization", "unit_area_scale"));
  } catch (const Error&) {
    r.error("normalization", "expected none or unit_area_scale");
  }

  const long long stride = r.integer(doc, "", "record_stride", c.record_stride);
  if (stride < 1) r.error("record_stride", "must be at least 1");
  c.record_stride = static_cast<int>(stride);
  const long long sob = r.integer(doc, "", "sobolev_max_n", c.sobolev_max_n);
  if (sob < 0 || sob > kMaxSobolevOrder) r.error("sobolev_max_n", "must be between 0 and 4");
  c.sobolev_max_n = static_cast<int>(sob);

  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    if (!o.is_object()) r.error("outputs", "expected an object");
    r.reject_unknown(o, "outputs.", {"csv", "report", "svg_dir", "snapshot_stride"});
    c.outputs.csv = r.string(o, "outputs.", "csv", "");
    c.outputs.report = r.string(o, "outputs.", "report", "");
    c.outputs.svg_dir = r.string(o, "outputs.", "svg_dir", "");
    const long long ss = r.integer(o, "outputs.", "snapshot_stride", 0);
    if (ss < 0) r.error("outputs.snapshot_stride", "must be non-negative");
    c.outputs.snapshot_stride = static_cast<int>(ss);
  }
  const long long seed = r.integer(doc, "", "seed", 0);
  if (seed < 0) r.error("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.dealias = r.boolean(doc, "", "dealias", c.dealias);
  c.cfl = r.number(doc, "", "cfl", c.cfl);
  if (!(c.cfl > 0.0)) r.error("cfl", "must be positive");
  c.check_convergence = r.boolean(doc, "", "check_convergence", c.check_convergence);
  if (c.check_convergence && c.flow == FlowKind::curvature) {
    r.error("check_convergence", "needs flow 'curve' or 'both' (the ellipse fit uses the curve)");
  }
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.detail());
  }
  try {
    return parse_config(text, path.parent_path());
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, path.string() + ": " + e.detail());
  }
}

fs::path default_output_dir() {
  if (const char* dir = std::getenv("CAFLOW_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return dir;
  return fs::current_path();
}

ClosedCurve build_curve(const ScenarioConfig& config) {
  return std::visit(
      [&](const auto& src) -> ClosedCurve {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, PresetSpec>) {
          return preset(src, config.n);
        } else if constexpr (std::is_same_v<T, RandomStar>) {
          return preset(random_star_convex(config.seed, config.n), config.n, {.require_convex = true});
        } else {
          ClosedCurve c = read_curve_json(src);
          if (c.size() != config.n) {
            fail(ErrorKind::ConfigError, "field 'N': " + std::to_string(config.n) + " does not match the " +
                                             std::to_string(c.size()) + " samples in " + src.string());
          }
          return c;
        }
      },
      config.curve);
}

ScenarioOutcome run_scenario(const ScenarioConfig& config, RunMode mode) {
  ScenarioOutcome out;
  const fs::path report_path = resolve_output(config.outputs.report, config.name + ".report.json");
  const fs::path csv_path = resolve_output(config.outputs.csv, config.name + ".csv");

  auto finish = [&](int code) {
    out.exit_code = code;
    emit_report(config.name, out.verdicts, report_path, out.failure);
    return out;
  };

  std::optional<ClosedCurve> c0;
  std::optional<InvariantField> f0;
  try {
    c0 = build_curve(config);
    f0 = centro_affine(*c0);
  } catch (const Error& e) {
    out.failure = FlowFailure{"initial", e.kind(), 0.0, e.detail()};
    return finish(1);
  }
  out.verdicts.push_back(check_mean_zero(*f0));
  out.verdicts.push_back(check_isoperimetric(*f0));
  const double phi0_min = f0->phi.min();
  const double phi0_max = f0->phi.max();

  RecordOptions record;
  record.stride = config.record_stride;
  record.sobolev_max_n = config.sobolev_max_n;
  record.snapshot_stride = config.outputs.snapshot_stride;

  std::optional<FlowTrajectory> scalar, curve;
  const bool want_scalar = config.flow != FlowKind::curve;
  const bool want_curve = config.flow != FlowKind::curvature;

  if (want_scalar) {
    try {
      CurvatureFlowOptions opts;
      opts.dealias = config.dealias;
      opts.cfl = config.cfl;
      scalar = evolve(initial_curvature_state(*f0), config.t_end, config.dt, record, opts);
    } catch (const FlowError& e) {
      out.failure = FlowFailure{"curvature", e.kind(), e.time(), e.detail()};
      return finish(3);
    }
    add_trajectory_verdicts(want_curve ? "curvature." : "", *scalar, phi0_min, phi0_max, out.verdicts);
  }
  if (want_curve) {
    try {
      CurveFlowOptions opts;
      opts.cfl = config.cfl;
      const CurveFlowState s0{0.0, *c0, config.lambda, config.normalization};
      curve = evolve(s0, config.t_end, config.dt, record, opts);
    } catch (const FlowError& e) {
      out.failure = FlowFailure{"curve", e.kind(), e.time(), e.detail()};
      return finish(3);
    }
    add_trajectory_verdicts(want_scalar ? "curve." : "", *curve, phi0_min, phi0_max, out.verdicts);
    if (config.check_convergence) {
      out.verdicts.push_back(check_convergence_to_ellipse(*curve, *curve->snapshots.back().curve));
    }
  }
  if (scalar && curve) {
    double worst = 0.0;
    const std::size_t count = std::min(scalar->snapshots.size(), curve->snapshots.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto& a = scalar->snapshots[i].phi;
      const auto& b = curve->snapshots[i].phi;
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    out.verdicts.push_back(Verdict{"flow_equivalence", worst <= 1e-4, worst, 0.0, 1e-4,
                                   "sup |φ_curve − φ_scalar| over " + std::to_string(count) + " snapshots"});
  }

  if (mode == RunMode::evolve) {
    if (curve) {
      emit_csv(*curve, csv_path);
      if (scalar) {
        emit_csv(*scalar, csv_path.parent_path() / (csv_path.stem().string() + ".curvature.csv"));
      }
    } else {
      emit_csv(*scalar, csv_path);
    }
    if (!config.outputs.svg_dir.empty() && curve) {
      const fs::path dir = resolve_output(config.outputs.svg_dir, {});
      for (std::size_t i = 0; i < curve->snapshots.size(); ++i) {
        const ClosedCurve& c = *curve->snapshots[i].curve;
        const EllipseFit fit = fit_origin_ellipse(c);
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_%04zu.svg", i);
        emit_svg(c, dir / (config.name + suffix),
                 fit.positive_definite ? std::optional<EllipseFit>(fit) : std::nullopt);
      }
    }
  }

  const bool all_passed = std::all_of(out.verdicts.begin(), out.verdicts.end(), [](const Verdict& v) { return v.passed; });
  return finish(all_passed ? 0 : 2);
}

int run_sweep(const fs::path& dir, RunMode mode) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) fail(ErrorKind::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<int> codes(files.size(), 0);
  std::vector<std::string> lines(files.size());
  const auto count = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const ScenarioOutcome o = run_scenario(load_config(files[i]), mode);
      codes[i] = o.exit_code;
    } catch (const Error& e) {
      codes[i] = e.kind() == ErrorKind::ConfigError ? 1 : 3;
      lines[i] = e.what();
    }
  }
  int worst = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::printf("%s: exit %d%s%s\n", files[i].filename().string().c_str(), codes[i], lines[i].empty() ? "" : " ",
                lines[i].c_str());
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Emitters

std::string csv_text(const FlowTrajectory& traj) {
  std::string s = kCsvHeader;
  s += '\n';
  for (const DiagnosticsRecord& r : traj.records) {
    const double fields[] = {r.t,          r.L,          r.E,          r.phi_min,    r.phi_max,
                             r.mean_phi,   r.sobolev[0], r.sobolev[1], r.sobolev[2], r.sobolev[3],
                             r.energy_identity_residual, r.h1_identity_residual, r.area};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) s += ',';
      s += g17(fields[i]);
    }
    s += '\n';
  }
  return s;
}

void emit_csv(const FlowTrajectory& traj, const fs::path& path) { write_file(path, csv_text(traj)); }

std::string svg_text(const ClosedCurve& curve, const std::optional<EllipseFit>& overlay) {
  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  for (const Vec2& c : curve.samples()) {
    lo_x = std::min(lo_x, c.x);
    hi_x = std::max(hi_x, c.x);
    lo_y = std::min(lo_y, -c.y);
    hi_y = std::max(hi_y, -c.y);
  }
  std::vector<Vec2> ellipse;
  if (overlay) {
    constexpr int kPoints = 128;
    for (int i = 0; i < kPoints; ++i) {
      const double th = 2.0 * std::numbers::pi * i / kPoints;
      const Vec2 u{std::cos(th), std::sin(th)};
      const double q = overlay->q11 * u.x * u.x + 2.0 * overlay->q12 * u.x * u.y + overlay->q22 * u.y * u.y;
      const Vec2 p = u / std::sqrt(q);
      ellipse.push_back(p);
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, -p.y);
      hi_y = std::max(hi_y, -p.y);
    }
  }
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  const double pad = 0.08 * span;
  const double stroke = 0.004 * span;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << g6(lo_x - pad) << ' ' << g6(lo_y - pad) << ' '
    << g6(hi_x - lo_x + 2 * pad) << ' ' << g6(hi_y - lo_y + 2 * pad) << "\">\n";
  s << "  <title>" << curve.name() << "</title>\n";
  if (!ellipse.empty()) {
    s << "  <polygon class=\"fitted-ellipse\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"" << g6(3 * stroke)
      << "\" stroke-width=\"" << g6(stroke) << "\" points=\"";
    for (std::size_t i = 0; i < ellipse.size(); ++i) {
      s << (i ? " " : "") << g6(ellipse[i].x) << ',' << g6(-ellipse[i].y);
    }
    s << "\"/>\n";
  }
  s << "  <path class=\"curve\" fill=\"none\" stroke=\"#124\" stroke-width=\"" << g6(stroke) << "\" d=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    s << (i ? " L " : "M ") << g6(curve[i].x) << ' ' << g6(-curve[i].y);
  }
  s << " Z\"/>\n";
  s << "  <circle class=\"origin\" cx=\"0\" cy=\"0\" r=\"" << g6(2.5 * stroke) << "\" fill=\"#000\"/>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const ClosedCurve& curve, const fs::path& path, const std::optional<EllipseFit>& overlay) {
  write_file(path, svg_text(curve, overlay));
}

std::string report_text(const std::string& scenario, const std::vector<Verdict>& verdicts,
                        const std::optional<FlowFailure>& failure) {
  json doc;
  doc["scenario"] = scenario;
  doc["verdicts"] = json::array();
  for (const Verdict& v : verdicts) doc["verdicts"].push_back(verdict_json(v));
  if (failure) {
    doc["flow_error"] = json{{"flow", failure->flow},
                             {"kind", to_string(failure->kind)},
                             {"time", failure->time},
                             {"message", failure->message}};
  }
  return doc.dump(2) + "\n";
}

void emit_report(const std::string& scenario, const std::vector<Verdict>& verdicts, const fs::path& path,
                 const std::optional<FlowFailure>& failure) {
  write_file(path, report_text(scenario, verdicts, failure));
}

ClosedCurve read_curve_json(const fs::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc.at("points").is_array()) {
    fail(ErrorKind::InvalidInput, path.string() + ": expected {\"points\": [[x, y], ...]}");
  }
  std::vector<Vec2> pts;
  for (const json& p : doc.at("points")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      fail(ErrorKind::InvalidInput, path.string() + ": point " + std::to_string(pts.size()) + " is not [x, y]");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  std::string name = doc.value("name", path.stem().string());
  return ClosedCurve(std::move(pts), std::move(name));
}

void write_curve_json(const ClosedCurve& curve, const fs::path& path) {
  json doc;
  doc["name"] = curve.name();
  json pts = json::array();
  for (const Vec2& c : curve.samples()) pts.push_back(json::array({c.x, c.y}));
  doc["points"] = std::move(pts);
  write_file(path, doc.dump() + "\n");
}

}  // namespace caflow
