#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "edgelap/quadrature.hpp"

namespace edgelap {

enum class Side { plus, minus };

inline double side_sign(Side s) { return s == Side::plus ? 1.0 : -1.0; }
const char* to_string(Side s) noexcept;

// Complex density psi on (a, b). holder_hint < 1 marks densities that are only
// Holder continuous; quadrature then switches to tanh-sinh near the singular point.
struct DensityFunction {
  double a = 0.0;
  double b = 1.0;
  std::function<cplx(double)> psi;
  double holder_hint = 1.0;

  cplx operator()(double t) const { return psi(t); }

  static DensityFunction constant(double a, double b, cplx c);
  static DensityFunction from_function(double a, double b, std::function<cplx(double)> f, double holder_hint = 1.0);
  // Cubic Hermite interpolation of real and imaginary parts.
  static DensityFunction from_samples(std::vector<double> t, std::vector<cplx> v, double holder_hint = 1.0);
};

struct CauchyValue {
  cplx value{};
  double error_estimate = 0.0;
};

struct BoundaryValue {
  double lambda = 0.0;
  Side side = Side::plus;
  cplx value{};
  cplx pv_part{};
  cplx jump_part{};
  double error_estimate = 0.0;
};

// int_a^b psi(t) / (t - z) dt for Im z != 0.
CauchyValue offaxis_cauchy(const DensityFunction& psi, cplx z);

// Plemelj boundary value p.v. int psi/(t - lambda) dt +- i pi psi(lambda).
BoundaryValue boundary_value(const DensityFunction& psi, double lambda, Side side);

struct SweepRow {
  double eps = 0.0;
  cplx offaxis{};
  double difference = 0.0;
};

struct EpsilonSweep {
  BoundaryValue limit;
  std::vector<SweepRow> rows;
  bool monotone = true;  // differences nonincreasing along the sweep
  double rate = 0.0;     // log-log slope of difference against eps
};

EpsilonSweep epsilon_sweep(const DensityFunction& psi, double lambda, Side side, const std::vector<double>& eps);

// max over pairs |v(z) - v(z')| / |z - z'|^alpha.
double holder_constant(const std::vector<std::pair<cplx, cplx>>& samples, double alpha);

// Least-squares slope of log y against log x (entries with y <= 0 skipped).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace edgelap
