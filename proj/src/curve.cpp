#include "caflow/curve.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "caflow/error.hpp"
#include "caflow/parallel.hpp"
#include "caflow/spectral.hpp"

namespace caflow {

double grid_parameter(std::size_t k, std::size_t n) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
}

PeriodicField::PeriodicField(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidInput, "periodic field holds a non-finite value");
  }
}

PeriodicField PeriodicField::constant(std::size_t n, double value) {
  return PeriodicField(std::vector<double>(n, value));
}

PeriodicField PeriodicField::sample(std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(grid_parameter(k, n));
  return PeriodicField(std::move(v));
}

double PeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double PeriodicField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double periodic_integral(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return 2.0 * std::numbers::pi / static_cast<double>(values.size()) * sum;
}

double periodic_integral(const PeriodicField& field) { return periodic_integral(field.values()); }

ClosedCurve::ClosedCurve(std::vector<Vec2> samples, std::string name)
    : samples_(std::move(samples)), name_(std::move(name)) {
  if (samples_.size() < kMinSamples) fail(ErrorKind::InvalidInput, "a closed curve needs at least 16 samples");
  if (samples_.size() % 2 != 0) fail(ErrorKind::InvalidInput, "curve grid size must be even");
  for (const Vec2& v : samples_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) fail(ErrorKind::InvalidInput, "curve has non-finite coordinates");
  }
}

ClosedCurve ClosedCurve::sample(std::size_t n, const std::function<Vec2(double)>& parametrization, std::string name) {
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = parametrization(grid_parameter(k, n));
  return ClosedCurve(std::move(pts), std::move(name));
}

std::vector<double> ClosedCurve::xs() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Vec2& v) { return v.x; });
  return out;
}

std::vector<double> ClosedCurve::ys() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Vec2& v) { return v.y; });
  return out;
}

ClosedCurve ClosedCurve::transformed(const Mat2& map) const {
  std::vector<Vec2> pts(samples_.size());
  std::transform(samples_.begin(), samples_.end(), pts.begin(), [&](const Vec2& v) { return map(v); });
  return ClosedCurve(std::move(pts), name_);
}

ClosedCurve ClosedCurve::scaled(double factor) const { return transformed(Mat2{factor, 0.0, 0.0, factor}); }

ClosedCurve ClosedCurve::renamed(std::string name) const { return ClosedCurve(samples_, std::move(name)); }

namespace {

std::vector<Vec2> zip(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<Vec2> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = {x[k], y[k]};
  return out;
}

}  // namespace

namespace {

// Coordinate spectra with roundoff-level modes removed. The cutoff is relative
// to the largest coefficient of either coordinate; below it the coefficients
// are FFT noise, which the third derivative would amplify by up to (N/2)³.
constexpr double kChopRelative = 1e-15;

std::pair<spectral::Spectrum, spectral::Spectrum> coordinate_spectra(const ClosedCurve& curve) {
  const std::vector<double> x = curve.xs();
  const std::vector<double> y = curve.ys();
  std::pair<spectral::Spectrum, spectral::Spectrum> s{spectral::Spectrum(x), spectral::Spectrum(y)};
  const double floor = kChopRelative * std::max(s.first.max_magnitude(), s.second.max_magnitude());
  s.first.chop(floor);
  s.second.chop(floor);
  return s;
}

}  // namespace

std::vector<Vec2> derivative(const ClosedCurve& curve, int order) {
  if (order < 1) fail(ErrorKind::InvalidInput, "derivative order must be >= 1");
  const auto [sx, sy] = coordinate_spectra(curve);
  return zip(sx.derivative(order), sy.derivative(order));
}

CurveJet jet(const ClosedCurve& curve) {
  const auto [sx, sy] = coordinate_spectra(curve);
  return CurveJet{zip(sx.derivative(1), sy.derivative(1)), zip(sx.derivative(2), sy.derivative(2)),
                  zip(sx.derivative(3), sy.derivative(3))};
}

std::vector<double> bracket_field(std::span<const Vec2> a, std::span<const Vec2> b) {
  const std::size_t n = a.size();
  std::vector<double> out(n);
#pragma omp parallel for if (n >= parallel::kGrain)
  for (std::size_t k = 0; k < n; ++k) out[k] = bracket(a[k], b[k]);
  return out;
}

double enclosed_area(const ClosedCurve& curve) {
  const std::vector<Vec2> d1 = derivative(curve, 1);
  return 0.5 * std::abs(periodic_integral(bracket_field(curve.samples(), d1)));
}

bool has_strict_sign(std::span<const double> values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double floor = 1e-12 * scale;
  const bool positive = values.front() > 0.0;
  for (double v : values) {
    if (std::abs(v) <= floor) return false;
    if ((v > 0.0) != positive) return false;
  }
  return true;
}

bool check_star_shaped(const ClosedCurve& curve) {
  return has_strict_sign(bracket_field(curve.samples(), derivative(curve, 1)));
}

bool check_convex(const ClosedCurve& curve) {
  const CurveJet j = jet(curve);
  return has_strict_sign(bracket_field(j.d1, j.d2));
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_mode_resolved(int mode, std::size_t n) {
  if (mode < 0 || static_cast<std::size_t>(mode) * 8 > n) {
    fail(ErrorKind::InvalidInput, "preset mode " + std::to_string(mode) + " exceeds N/8 for N=" + std::to_string(n));
  }
}

void validate_shape(const ClosedCurve& curve, const PresetOptions& options) {
  if (!check_star_shaped(curve)) {
    fail(ErrorKind::NotStarShaped, "preset '" + curve.name() + "': [C, C_p] changes sign");
  }
  if (options.require_convex && !check_convex(curve)) {
    fail(ErrorKind::InvalidInput, "preset '" + curve.name() + "' is not convex");
  }
}

}  // namespace

std::string describe(const PresetSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const OriginEllipse& e) { os << "origin_ellipse(" << e.a << "," << e.b << ")"; },
                 [&](const ShiftedEllipse& e) {
                   os << "shifted_ellipse(" << e.a << "," << e.b << "," << e.x0 << "," << e.y0 << ")";
                 },
                 [&](const PerturbedEllipse& e) {
                   os << "perturbed_ellipse(" << e.a << "," << e.b << "," << e.amplitude << "," << e.mode << ")";
                 },
                 [&](const StarConvex& s) {
                   os << "star_convex(radius=" << s.radius << ",modes=" << std::max(s.cos_coeffs.size(), s.sin_coeffs.size())
                      << ")";
                 },
             },
             spec);
  return os.str();
}

ClosedCurve preset(const PresetSpec& spec, std::size_t n, PresetOptions options) {
  const std::string name = describe(spec);
  return std::visit(
      Overloaded{
          [&](const OriginEllipse& e) {
            if (!(e.a > 0.0 && e.b > 0.0)) fail(ErrorKind::InvalidInput, "ellipse axes must be positive");
            return ClosedCurve::sample(n, [&](double p) { return Vec2{e.a * std::cos(p), e.b * std::sin(p)}; }, name);
          },
          [&](const ShiftedEllipse& e) {
            if (!(e.a > 0.0 && e.b > 0.0)) fail(ErrorKind::InvalidInput, "ellipse axes must be positive");
            return ClosedCurve::sample(
                n, [&](double p) { return Vec2{e.x0 + e.a * std::cos(p), e.y0 + e.b * std::sin(p)}; }, name);
          },
          [&](const PerturbedEllipse& e) {
            if (!(e.a > 0.0 && e.b > 0.0)) fail(ErrorKind::InvalidInput, "ellipse axes must be positive");
            require_mode_resolved(e.mode, n);
            ClosedCurve c = ClosedCurve::sample(
                n,
                [&](double p) {
                  const double r = 1.0 + e.amplitude * std::cos(e.mode * p);
                  return Vec2{r * e.a * std::cos(p), r * e.b * std::sin(p)};
                },
                name);
            validate_shape(c, options);
            return c;
          },
          [&](const StarConvex& s) {
            const std::size_t modes = std::max(s.cos_coeffs.size(), s.sin_coeffs.size());
            require_mode_resolved(static_cast<int>(modes), n);
            ClosedCurve c = ClosedCurve::sample(
                n,
                [&](double p) {
                  double r = s.radius;
                  for (std::size_t k = 0; k < s.cos_coeffs.size(); ++k) r += s.cos_coeffs[k] * std::cos((k + 1) * p);
                  for (std::size_t k = 0; k < s.sin_coeffs.size(); ++k) r += s.sin_coeffs[k] * std::sin((k + 1) * p);
                  return Vec2{r * std::cos(p), r * std::sin(p)};
                },
                name);
            validate_shape(c, options);
            return c;
          },
      },
      spec);
}

namespace {

// Nearly flat stretches make phi large and under-resolved on coarse grids.
constexpr double kRandomConvexityMargin = 0.1;

double convexity_margin(const ClosedCurve& c) {
  const CurveJet j = jet(c);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double q = std::abs(bracket(j.d1[i], j.d2[i]));
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return lo / hi;
}

}  // namespace

StarConvex random_star_convex(std::uint64_t seed, std::size_t n) {
  constexpr std::size_t kModes = 6;
  std::mt19937_64 engine(seed);
  // 53 random bits mapped to [-1, 1); avoids implementation-defined distributions.
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0; };

  StarConvex s;
  s.radius = 1.0;
  for (std::size_t k = 1; k <= kModes; ++k) {
    s.cos_coeffs.push_back(0.1 / static_cast<double>(k) * uniform());
    s.sin_coeffs.push_back(0.1 / static_cast<double>(k) * uniform());
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    const ClosedCurve c = ClosedCurve::sample(n, [&](double p) {
      double r = s.radius;
      for (std::size_t k = 0; k < kModes; ++k) r += s.cos_coeffs[k] * std::cos((k + 1) * p) + s.sin_coeffs[k] * std::sin((k + 1) * p);
      return Vec2{r * std::cos(p), r * std::sin(p)};
    });
    if (check_star_shaped(c) && check_convex(c) && convexity_margin(c) >= kRandomConvexityMargin) return s;
    for (auto& v : s.cos_coeffs) v *= 0.5;
    for (auto& v : s.sin_coeffs) v *= 0.5;
  }
  fail(ErrorKind::InvalidInput, "could not produce a convex star preset");
}

}  // namespace caflow
