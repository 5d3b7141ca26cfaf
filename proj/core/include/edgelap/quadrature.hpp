#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace edgelap {

using cplx = std::complex<double>;

struct QuadResult {
  cplx value{};
  double error = 0.0;
  double l1 = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15); recursion depth 14 caps the panel count at 2^14.
QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, double rel_tol = 1e-12);

// Tanh-sinh, for integrable endpoint singularities.
QuadResult integrate_ts(const std::function<cplx(double)>& f, double a, double b, double rel_tol = 1e-12);

// Sum over consecutive panels [p_i, p_{i+1}].
QuadResult integrate_panels(const std::function<cplx(double)>& f, const std::vector<double>& points,
                            double rel_tol = 1e-12);

// Breakpoints a = p_0 < ... < p_m = b refined geometrically towards x0:
// x0 +- scale * 2^j, j = 0, 1, ... (x0 itself included when interior).
std::vector<double> graded_points(double a, double b, double x0, double scale);

}  // namespace edgelap
