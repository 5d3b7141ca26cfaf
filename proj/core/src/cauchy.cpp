#include "edgelap/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "edgelap/error.hpp"
#include "edgelap/interp.hpp"

namespace edgelap {

const char* to_string(Side s) noexcept { return s == Side::plus ? "plus" : "minus"; }

DensityFunction DensityFunction::constant(double a, double b, cplx c) {
  return from_function(a, b, [c](double) { return c; });
}

DensityFunction DensityFunction::from_function(double a, double b, std::function<cplx(double)> f, double hint) {
  require(b > a, "density interval must be non-degenerate");
  require(static_cast<bool>(f), "density needs an evaluator");
  require(hint > 0.0 && hint <= 1.0, "Holder hint must lie in (0,1]");
  DensityFunction d;
  d.a = a;
  d.b = b;
  d.psi = std::move(f);
  d.holder_hint = hint;
  return d;
}

DensityFunction DensityFunction::from_samples(std::vector<double> t, std::vector<cplx> v, double hint) {
  require(t.size() >= 3 && t.size() == v.size(), "density needs at least three samples");
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i].real()) && std::isfinite(v[i].imag()), "density samples must be finite");
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  const double a = t.front(), b = t.back();
  auto pr = std::make_shared<HermiteCubic>(HermiteCubic::smooth(t, re));
  auto pi = std::make_shared<HermiteCubic>(HermiteCubic::smooth(std::move(t), im));
  return from_function(a, b, [pr, pi](double x) { return cplx((*pr)(x), (*pi)(x)); }, hint);
}

CauchyValue offaxis_cauchy(const DensityFunction& psi, cplx z) {
  const double eta = std::abs(z.imag());
  require(eta > 0.0, "offaxis_cauchy needs Im z != 0");
  const double a = psi.a, b = psi.b, len = b - a;
  if (eta < 1e-13 * std::max(1.0, std::abs(z.real())))
    fail(ErrorKind::quadrature_failure, "imaginary part too small; use the boundary value");

  const double x0 = std::clamp(z.real(), a, b);
  const cplx p0 = psi(x0);
  cplx c = 0.0;
  if (psi.holder_hint >= 1.0) {
    const double d = 1e-4 * len;
    const double lo = std::max(a, x0 - d), hi = std::min(b, x0 + d);
    c = (psi(hi) - psi(lo)) / (hi - lo);
  }
  // int dt/(t - z); the cut of each log is never crossed since Im(t - z) has fixed sign.
  const cplx L = std::log(cplx(b) - z) - std::log(cplx(a) - z);
  const cplx analytic = p0 * L + c * (len + (z - x0) * L);
  auto g = [&](double t) -> cplx { return (psi(t) - p0 - c * (t - x0)) / (t - z); };

  QuadResult q;
  const double dist = std::abs(z - cplx(x0));
  if (dist >= 0.25 * len && psi.holder_hint >= 1.0) {
    q = integrate_gk(g, a, b);
  } else {
    const std::vector<double> pts = graded_points(a, b, x0, std::min(eta, 0.25 * len));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const bool touches = pts[i] == x0 || pts[i + 1] == x0;
      const QuadResult r = (touches && psi.holder_hint < 1.0) ? integrate_ts(g, pts[i], pts[i + 1])
                                                              : integrate_gk(g, pts[i], pts[i + 1]);
      q.value += r.value;
      q.error += r.error;
      q.l1 += r.l1;
    }
  }
  CauchyValue out;
  out.value = analytic + q.value;
  out.error_estimate = q.error;
  if (!(q.error <= 1e-6 * std::max(1.0, std::abs(out.value))))
    fail(ErrorKind::quadrature_failure, "Cauchy quadrature did not converge");
  return out;
}

BoundaryValue boundary_value(const DensityFunction& psi, double lambda, Side side) {
  const double a = psi.a, b = psi.b;
  require(lambda > a && lambda < b, "boundary value needs lambda strictly inside (a,b)");
  constexpr double kEndpointGap = 1e-6;
  if (lambda - a < kEndpointGap && std::abs(psi(a)) > 1e-14)
    fail(ErrorKind::endpoint_proximity, "lambda near the left endpoint where the density does not vanish");
  if (b - lambda < kEndpointGap && std::abs(psi(b)) > 1e-14)
    fail(ErrorKind::endpoint_proximity, "lambda near the right endpoint where the density does not vanish");

  const cplx pl = psi(lambda);
  auto g = [&](double t) -> cplx {
    if (t == lambda) return 0.0;
    return (psi(t) - pl) / (t - lambda);
  };
  QuadResult left, right;
  if (psi.holder_hint < 1.0) {
    left = integrate_ts(g, a, lambda);
    right = integrate_ts(g, lambda, b);
  } else {
    left = integrate_gk(g, a, lambda);
    right = integrate_gk(g, lambda, b);
  }
  BoundaryValue bv;
  bv.lambda = lambda;
  bv.side = side;
  bv.pv_part = left.value + right.value + pl * std::log((b - lambda) / (lambda - a));
  bv.jump_part = cplx(0.0, side_sign(side) * std::numbers::pi) * pl;
  bv.value = bv.pv_part + bv.jump_part;
  bv.error_estimate = left.error + right.error;
  return bv;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    m += 1;
  }
  if (m < 2) return 0.0;
  const double den = m * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
}

EpsilonSweep epsilon_sweep(const DensityFunction& psi, double lambda, Side side, const std::vector<double>& eps) {
  require(!eps.empty(), "empty epsilon list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0, "epsilon values must be positive");
    if (i) require(eps[i] < eps[i - 1], "epsilon values must decrease");
  }
  EpsilonSweep s;
  s.limit = boundary_value(psi, lambda, side);
  std::vector<double> diffs;
  for (double e : eps) {
    SweepRow r;
    r.eps = e;
    r.offaxis = offaxis_cauchy(psi, cplx(lambda, side_sign(side) * e)).value;
    r.difference = std::abs(r.offaxis - s.limit.value);
    s.rows.push_back(r);
    diffs.push_back(r.difference);
  }
  for (std::size_t i = 1; i < s.rows.size(); ++i)
    if (s.rows[i].difference > s.rows[i - 1].difference) s.monotone = false;
  s.rate = loglog_slope(eps, diffs);
  return s;
}

double holder_constant(const std::vector<std::pair<cplx, cplx>>& samples, double alpha) {
  require(samples.size() >= 10, "Holder estimate needs at least 10 samples");
  require(alpha > 0.0 && alpha <= 1.0, "Holder exponent must lie in (0,1]");
  double best = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double d = std::abs(samples[i].first - samples[j].first);
      if (d == 0.0) continue;
      best = std::max(best, std::abs(samples[i].second - samples[j].second) / std::pow(d, alpha));
    }
  return best;
}

}  // namespace edgelap
