#include "edgelap/error.hpp"

#include <atomic>

#include "edgelap/parallel.hpp"

namespace edgelap {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::discretization_too_coarse: return "discretization-too-coarse";
    case ErrorKind::truncation_too_small: return "truncation-too-small";
    case ErrorKind::monotonicity_violation: return "monotonicity-violation";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::window_too_wide: return "window-too-wide";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::unresolved_oscillation: return "unresolved-oscillation";
    case ErrorKind::rectangle_too_small: return "rectangle-too-small";
    case ErrorKind::insufficient_tail_resolution: return "insufficient-tail-resolution";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::endpoint_proximity: return "endpoint-proximity";
    case ErrorKind::proximity_to_cut: return "proximity-to-cut";
    case ErrorKind::membership_violation: return "membership-violation";
    case ErrorKind::resolution_floor: return "resolution-floor";
    case ErrorKind::margin_too_small: return "margin-too-small";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
    case ErrorKind::domination_failure: return "domination-failure";
  }
  return "unknown";
}

namespace {
std::atomic<unsigned> g_parallelism{0};
}

void set_parallelism(unsigned degree) { g_parallelism.store(degree); }

unsigned parallelism() {
  const unsigned p = g_parallelism.load();
  return p == 0 ? default_parallelism() : p;
}

}  // namespace edgelap
