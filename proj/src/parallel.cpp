#include "caflow/parallel.hpp"

#include <omp.h>

#include <optional>
#include <string>

#include "caflow/error.hpp"

namespace caflow::parallel {
namespace {

CurveSummary summarize_one(const ClosedCurve& curve) {
  CurveSummary s;
  try {
    const InvariantField f = centro_affine(curve);
    s.perimeter = perimeter(f);
    s.energy = energy(f);
    s.mean_phi = curvature_mean(f);
    s.phi_min = f.phi.min();
    s.phi_max = f.phi.max();
    s.ok = true;
  } catch (const Error&) {
    s.ok = false;
  }
  return s;
}

ClosedCurve random_curve(std::uint64_t seed, std::size_t n) {
  return preset(random_star_convex(seed, n), n, {.require_convex = true}).renamed("star_convex(seed=" +
                                                                                  std::to_string(seed) + ")");
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<CurveSummary> summarize(const std::vector<ClosedCurve>& curves) {
  std::vector<CurveSummary> out(curves.size());
  const auto count = static_cast<std::ptrdiff_t>(curves.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = summarize_one(curves[i]);
  return out;
}

std::vector<CurveSummary> summarize_serial(const std::vector<ClosedCurve>& curves) {
  std::vector<CurveSummary> out;
  out.reserve(curves.size());
  for (const ClosedCurve& c : curves) out.push_back(summarize_one(c));
  return out;
}

std::vector<ClosedCurve> random_star_convex_batch(std::uint64_t first_seed, std::size_t count, std::size_t n) {
  std::vector<std::optional<ClosedCurve>> slots(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    try {
      slots[i] = random_curve(first_seed + static_cast<std::uint64_t>(i), n);
    } catch (const Error& e) {
#pragma omp critical
      {
        failed = true;
        message = e.what();
      }
    }
  }
  if (failed) fail(ErrorKind::InvalidInput, message);
  std::vector<ClosedCurve> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<ClosedCurve> random_star_convex_batch_serial(std::uint64_t first_seed, std::size_t count,
                                                         std::size_t n) {
  std::vector<ClosedCurve> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_curve(first_seed + i, n));
  return out;
}

}  // namespace caflow::parallel
