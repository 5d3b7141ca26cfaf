#pragma once

#include <stdexcept>
#include <string>

namespace edgelap {

enum class ErrorKind {
  invalid_input,
  discretization_too_coarse,
  truncation_too_small,
  monotonicity_violation,
  out_of_range,
  window_too_wide,
  aliasing,
  truncation,
  unresolved_oscillation,
  rectangle_too_small,
  insufficient_tail_resolution,
  quadrature_failure,
  endpoint_proximity,
  proximity_to_cut,
  membership_violation,
  resolution_floor,
  margin_too_small,
  degenerate_fit,
  domination_failure,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_input, what);
}

}  // namespace edgelap
