#include "edgelap/tridiag.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "edgelap/error.hpp"

namespace edgelap {

std::vector<double> SymTridiag::apply(const std::vector<double>& x) const {
  const std::size_t m = d.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = d[i] * x[i];
    if (i > 0) s += e[i - 1] * x[i - 1];
    if (i + 1 < m) s += e[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

TridiagPencil::TridiagPencil(SymTridiag a, SymTridiag b) : a_(std::move(a)), b_(std::move(b)) {
  require(a_.size() >= 2 && a_.size() == b_.size(), "pencil sizes must match and be at least 2");
  require(a_.e.size() + 1 == a_.size() && b_.e.size() + 1 == b_.size(), "malformed tridiagonal");
}

std::size_t TridiagPencil::count_below(double sigma) const {
  const std::size_t m = size();
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t neg = 0;
  double piv = a_.d[0] - sigma * b_.d[0];
  for (std::size_t i = 0;; ++i) {
    if (piv == 0.0) piv = -tiny;
    if (piv < 0.0) ++neg;
    if (i + 1 == m) break;
    const double off = a_.e[i] - sigma * b_.e[i];
    piv = (a_.d[i + 1] - sigma * b_.d[i + 1]) - off * off / piv;
  }
  return neg;
}

double TridiagPencil::bisect(std::size_t index, double rel_tol) const {
  require(index < size(), "eigenvalue index out of range");
  double lo = -1.0;
  while (count_below(lo) > index) lo *= 2.0;
  double hi = 1.0;
  while (count_below(hi) <= index) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) > index) hi = mid;
    else lo = mid;
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> TridiagPencil::inverse_iteration(double sigma, int iterations) const {
  const std::size_t m = size();
  std::vector<double> sub(m - 1), diag(m), sup(m - 1);
  for (std::size_t i = 0; i < m; ++i) diag[i] = a_.d[i] - sigma * b_.d[i];
  for (std::size_t i = 0; i + 1 < m; ++i) sub[i] = sup[i] = a_.e[i] - sigma * b_.e[i];

  // Deterministic start vector with no special symmetry.
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i));
  for (int it = 0; it < iterations; ++it) {
    x = solve_tridiagonal(sub, diag, sup, b_.apply(x));
    const double nrm = std::sqrt(b_inner(x, x));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) fail(ErrorKind::discretization_too_coarse, "inverse iteration broke down");
    for (double& v : x) v /= nrm;
  }
  return x;
}

double TridiagPencil::b_inner(const std::vector<double>& x, const std::vector<double>& y) const {
  const std::size_t m = size();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    s += b_.d[i] * x[i] * y[i];
    if (i + 1 < m) s += b_.e[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  }
  return s;
}

std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t m = diag.size();
  std::vector<double> sup2(m, 0.0);
  const double tiny = std::numeric_limits<double>::epsilon() * 1e-3;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(diag[i]) >= std::abs(sub[i])) {
      if (diag[i] == 0.0) diag[i] = tiny;
      const double f = sub[i] / diag[i];
      diag[i + 1] -= f * sup[i];
      rhs[i + 1] -= f * rhs[i];
      sub[i] = 0.0;
    } else {
      // swap rows i and i+1
      const double f = diag[i] / sub[i];
      diag[i] = sub[i];
      const double t = diag[i + 1];
      diag[i + 1] = sup[i] - f * t;
      sup[i] = t;
      if (i + 2 < m) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = -f * sup2[i];
      }
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= f * rhs[i];
    }
  }
  if (diag[m - 1] == 0.0) diag[m - 1] = tiny;
  std::vector<double> x(m);
  x[m - 1] = rhs[m - 1] / diag[m - 1];
  if (m >= 2) x[m - 2] = (rhs[m - 2] - sup[m - 2] * x[m - 1]) / diag[m - 2];
  for (std::size_t i = m - 2; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
  return x;
}

}  // namespace edgelap
