#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace caflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Determinant [a, b] = a_x b_y − a_y b_x.
constexpr double bracket(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Row-major 2×2 matrix acting on column vectors.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  constexpr double det() const { return a * d - b * c; }
  constexpr Vec2 operator()(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

/// p_k = 2πk/N.
double grid_parameter(std::size_t k, std::size_t n);

class PeriodicField {
 public:
  PeriodicField() = default;
  explicit PeriodicField(std::vector<double> values);

  static PeriodicField constant(std::size_t n, double value);
  static PeriodicField sample(std::size_t n, const std::function<double(double)>& f);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double min() const;
  double max() const;
  double max_abs() const;

 private:
  std::vector<double> values_;
};

/// Trapezoidal rule (2π/N)·Σ f_k; spectrally accurate for smooth periodic f.
double periodic_integral(const PeriodicField& field);
double periodic_integral(std::span<const double> values);

/// Immutable, uniformly sampled closed curve over the periodic parameter p.
class ClosedCurve {
 public:
  static constexpr std::size_t kMinSamples = 16;

  explicit ClosedCurve(std::vector<Vec2> samples, std::string name = {});

  static ClosedCurve sample(std::size_t n, const std::function<Vec2(double)>& parametrization,
                            std::string name = {});

  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const Vec2> samples() const noexcept { return samples_; }
  const Vec2& operator[](std::size_t k) const { return samples_[k]; }
  const std::string& name() const noexcept { return name_; }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

  ClosedCurve transformed(const Mat2& map) const;
  ClosedCurve scaled(double factor) const;
  ClosedCurve renamed(std::string name) const;

 private:
  std::vector<Vec2> samples_;
  std::string name_;
};

/// Component-wise spectral derivative d^order C / dp^order.
std::vector<Vec2> derivative(const ClosedCurve& curve, int order);

/// C_p, C_pp, C_ppp computed from one forward transform per coordinate.
struct CurveJet {
  std::vector<Vec2> d1, d2, d3;
};
CurveJet jet(const ClosedCurve& curve);

/// Euclidean enclosed area ½∮[C, C_p] dp (absolute value).
double enclosed_area(const ClosedCurve& curve);

// Pointwise bracket fields used by the shape checks and the invariants.
std::vector<double> bracket_field(std::span<const Vec2> a, std::span<const Vec2> b);

/// True when every entry has the same strict sign: |v_k| > 1e-12·max|v|.
bool has_strict_sign(std::span<const double> values);

bool check_star_shaped(const ClosedCurve& curve);  // [C, C_p]
bool check_convex(const ClosedCurve& curve);       // [C_p, C_pp]

// ---------------------------------------------------------------------------
// Presets

struct OriginEllipse {
  double a = 1.0;
  double b = 1.0;
};

struct ShiftedEllipse {
  double a = 1.0;
  double b = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
};

/// (1 + amplitude·cos(mode·p)) (a cos p, b sin p).
struct PerturbedEllipse {
  double a = 1.0;
  double b = 1.0;
  double amplitude = 0.0;
  int mode = 2;
};

/// Polar curve r(p)(cos p, sin p) with r(p) = radius + Σ_k cos_k cos(kp) + sin_k sin(kp), k >= 1.
struct StarConvex {
  double radius = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

using PresetSpec = std::variant<OriginEllipse, ShiftedEllipse, PerturbedEllipse, StarConvex>;

struct PresetOptions {
  bool require_convex = false;
};

/// Samples the preset on n nodes. Perturbed and star presets are validated
/// (star-shaped, and convex when requested); ellipses are returned as built.
ClosedCurve preset(const PresetSpec& spec, std::size_t n, PresetOptions options = {});

std::string describe(const PresetSpec& spec);

/// Random convex star preset: six modes with coefficients uniform in
/// [−0.1/k, 0.1/k], halved until the sampled curve is convex with
/// min|[C_p, C_pp]| >= 0.1·max|[C_p, C_pp]|.
StarConvex random_star_convex(std::uint64_t seed, std::size_t n = 256);

}  // namespace caflow
