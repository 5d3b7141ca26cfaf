#include "edgelap/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "edgelap/error.hpp"

namespace edgelap {

namespace {
constexpr unsigned kMaxDepth = 14;
}

QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, double rel_tol) {
  QuadResult r;
  if (a == b) return r;
  using boost::math::quadrature::gauss_kronrod;
  // Integrated on (-1,1): the library's termination test is not scale invariant and stalls on short panels.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double t) -> cplx { return f(mid + half * t); };
  r.value = half * gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, kMaxDepth, rel_tol, &r.error, &r.l1);
  r.error *= std::abs(half);
  r.l1 *= std::abs(half);
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    fail(ErrorKind::quadrature_failure, "non-finite Gauss-Kronrod result");
  return r;
}

QuadResult integrate_ts(const std::function<cplx(double)>& f, double a, double b, double rel_tol) {
  QuadResult r;
  if (a == b) return r;
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  try {
    // Mapped by hand onto (-1,1): the finite-interval overload asserts when an abscissa rounds onto an endpoint.
    // tc is the signed distance of t to the nearer end of (-1,1); nodes that round onto a or b are dropped.
    const double half = 0.5 * (b - a);
    auto g = [&](double t, double tc) -> cplx {
      const double x = t < 0.0 ? a + half * std::abs(tc) : b - half * std::abs(tc);
      return x <= a || x >= b ? cplx(0.0) : f(x);
    };
    r.value = half * ts.integrate(g, rel_tol, &r.error, &r.l1);
    r.error *= half;
    r.l1 *= half;
  } catch (const std::exception& e) {
    fail(ErrorKind::quadrature_failure, std::string("tanh-sinh: ") + e.what());
  }
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    fail(ErrorKind::quadrature_failure, "non-finite tanh-sinh result");
  return r;
}

QuadResult integrate_panels(const std::function<cplx(double)>& f, const std::vector<double>& points,
                            double rel_tol) {
  QuadResult total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const QuadResult r = integrate_gk(f, points[i], points[i + 1], rel_tol);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  }
  return total;
}

std::vector<double> graded_points(double a, double b, double x0, double scale) {
  std::vector<double> p{a};
  x0 = std::clamp(x0, a, b);
  std::vector<double> left, right;
  for (double d = scale; x0 - d > a; d *= 2.0) left.push_back(x0 - d);
  for (double d = scale; x0 + d < b; d *= 2.0) right.push_back(x0 + d);
  std::reverse(left.begin(), left.end());
  p.insert(p.end(), left.begin(), left.end());
  if (x0 > a && x0 < b) p.push_back(x0);
  p.insert(p.end(), right.begin(), right.end());
  p.push_back(b);
  return p;
}

}  // namespace edgelap
