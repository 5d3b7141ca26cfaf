#include "edgelap/interp.hpp"

#include <algorithm>
#include <cmath>

#include "edgelap/error.hpp"

namespace edgelap {

namespace {

void limit_slopes(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& d) {
  const std::size_t m = x.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (delta == 0.0) {
      d[i] = d[i + 1] = 0.0;
      continue;
    }
    if (d[i] * delta < 0.0) d[i] = 0.0;
    if (d[i + 1] * delta < 0.0) d[i + 1] = 0.0;
    const double a = d[i] / delta, b = d[i + 1] / delta;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      d[i] = t * a * delta;
      d[i + 1] = t * b * delta;
    }
  }
}

}  // namespace

HermiteCubic::HermiteCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes, bool limit)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  require(x_.size() >= 2 && y_.size() == x_.size() && d_.size() == x_.size(), "interpolant needs matching arrays");
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) require(x_[i + 1] > x_[i], "interpolation nodes must increase");
  if (limit) limit_slopes(x_, y_, d_);
}

HermiteCubic HermiteCubic::smooth(std::vector<double> x, std::vector<double> y) {
  const std::size_t m = x.size();
  require(m >= 2 && y.size() == m, "interpolant needs matching arrays");
  std::vector<double> d(m);
  if (m == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
  } else {
    auto three = [&](std::size_t i0, double t) {
      // derivative at t of the parabola through nodes i0, i0+1, i0+2
      const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
      return y[i0] * ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2)) +
             y[i0 + 1] * ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2)) +
             y[i0 + 2] * ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    };
    d[0] = three(0, x[0]);
    for (std::size_t i = 1; i + 1 < m; ++i) d[i] = three(i - 1, x[i]);
    d[m - 1] = three(m - 3, x[m - 1]);
  }
  return HermiteCubic(std::move(x), std::move(y), std::move(d), false);
}

HermiteCubic HermiteCubic::monotone(std::vector<double> x, std::vector<double> y) {
  const std::size_t m = x.size();
  require(m >= 2 && y.size() == m, "interpolant needs matching arrays");
  std::vector<double> d(m);
  std::vector<double> h(m - 1), del(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (m == 2) {
    d[0] = d[1] = del[0];
  } else {
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    d[0] = del[0];
    d[m - 1] = del[m - 2];
  }
  return HermiteCubic(std::move(x), std::move(y), std::move(d));
}

std::size_t HermiteCubic::segment(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double HermiteCubic::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * d_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
         (s3 - s2) * h * d_[i + 1];
}

double HermiteCubic::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  return (6 * s2 - 6 * s) / h * y_[i] + (3 * s2 - 4 * s + 1) * d_[i] + (-6 * s2 + 6 * s) / h * y_[i + 1] +
         (3 * s2 - 2 * s) * d_[i + 1];
}

double HermiteCubic::inverse(double v) const {
  const bool decreasing = y_.back() < y_.front();
  const std::size_t m = x_.size();
  // locate the segment containing v
  std::size_t lo = 0, hi = m - 1;
  auto before = [&](std::size_t i) { return decreasing ? y_[i] >= v : y_[i] <= v; };
  if (!before(0) || before(m - 1)) {
    if (v == y_.back()) return x_.back();
    fail(ErrorKind::out_of_range, "value outside interpolant range");
  }
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (before(mid)) lo = mid;
    else hi = mid;
  }
  if (y_[lo] == v) return x_[lo];
  double a = x_[lo], b = x_[hi];
  double t = a + (b - a) * (v - y_[lo]) / (y_[hi] - y_[lo]);
  for (int it = 0; it < 100; ++it) {
    const double f = (*this)(t) - v;
    if (f == 0.0) return t;
    const bool left = decreasing ? f > 0.0 : f < 0.0;
    if (left) a = t;
    else b = t;
    const double dp = derivative(t);
    double tn = dp != 0.0 ? t - f / dp : 0.5 * (a + b);
    if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
    if (std::abs(tn - t) <= 1e-15 * std::max(1.0, std::abs(t))) return tn;
    t = tn;
    if (b - a <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

}  // namespace edgelap
