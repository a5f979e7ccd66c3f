#pragma once

// Batch evaluation across independent curves and scenarios.
//
// Each batch routine has an OpenMP version and a serial reference with the
// same signature. Work items share nothing, so both produce bit-identical
// results; the serial versions back the tests and the benchmark baseline.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "caflow/curve.hpp"
#include "caflow/invariants.hpp"

namespace caflow::parallel {

// Pointwise grid loops switch to OpenMP above this many nodes.
inline constexpr std::size_t kGrain = 8192;

int max_threads();

struct CurveSummary {
  bool ok = false;
  double perimeter = 0.0;
  double energy = 0.0;
  double mean_phi = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
};

std::vector<CurveSummary> summarize(const std::vector<ClosedCurve>& curves);
std::vector<CurveSummary> summarize_serial(const std::vector<ClosedCurve>& curves);

std::vector<ClosedCurve> random_star_convex_batch(std::uint64_t first_seed, std::size_t count, std::size_t n);
std::vector<ClosedCurve> random_star_convex_batch_serial(std::uint64_t first_seed, std::size_t count,
                                                         std::size_t n);

}  // namespace caflow::parallel
