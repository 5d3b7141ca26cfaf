#include "edgelap/decay.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgelap/error.hpp"
#include "edgelap/format.hpp"

namespace edgelap {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

void check_family(const ModeFunction& mode, const FiberFamily& family) {
  require(mode.n() == family.n(), "mode and family belong to different bands");
  require(mode.k_grid() == family.k_grid(), "mode and family must share the k-grid");
}

// P(x_i) = sum_j w_j |f_j|^2 u_j(x_i)^2 on the fiber nodes.
std::vector<double> profile_on_nodes(const ModeFunction& mode, const FiberFamily& family) {
  const auto w = trapezoid_weights(mode.k_grid());
  const std::size_t nx = family.grid().n_points;
  std::vector<double> p(nx, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double c = w[j] * std::norm(mode.samples()[j]);
    if (c == 0.0) continue;
    const auto& u = family.u(j);
    for (std::size_t i = 0; i < nx; ++i) p[i] += c * u[i] * u[i];
  }
  return p;
}

// Gaussian continuation of the profile beyond x_max from the last unit interval.
double beyond_grid(const ModeFunction& mode, const FiberFamily& family, double from) {
  const FiberGrid& g = family.grid();
  const auto w = trapezoid_weights(mode.k_grid());
  const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor((g.x_max - 1.0) / g.h)));
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double c = w[j] * std::norm(mode.samples()[j]);
    if (c == 0.0) continue;
    const double k = mode.k_grid()[j];
    const auto& u = family.u(j);
    double log_c = -std::numeric_limits<double>::infinity();
    for (std::size_t i = i0; i + 1 < g.n_points; ++i)
      if (u[i] != 0.0) log_c = std::max(log_c, std::log(std::abs(u[i])) + 0.5 * (g.x(i) - k) * (g.x(i) - k));
    if (!std::isfinite(log_c)) continue;
    const double e = std::erfc(from - k);
    if (e > 0.0) total += c * std::exp(2.0 * log_c + std::log(0.5 * std::sqrt(std::numbers::pi) * e));
  }
  return total;
}

double tail_from_profile(const std::vector<double>& p, const FiberGrid& g, double L) {
  if (L >= g.x_max) return 0.0;
  const double s = L / g.h;
  auto i = static_cast<std::size_t>(std::floor(s));
  double total = 0.0;
  if (i + 1 < g.n_points) {
    const double t = s - static_cast<double>(i);
    const double pl = (1.0 - t) * p[i] + t * p[i + 1];
    total += 0.5 * (1.0 - t) * g.h * (pl + p[i + 1]);
  }
  for (std::size_t m = i + 1; m + 1 < g.n_points; ++m) total += 0.5 * g.h * (p[m] + p[m + 1]);
  return total;
}

double tail_mass_impl(const ModeFunction& mode, const FiberFamily& family, const std::vector<double>& p, double L) {
  require(L >= 0.0, "L must be nonnegative");
  const FiberGrid& g = family.grid();
  if (L > g.x_max - 1.0) {
    const double edge = tail_from_profile(p, g, g.x_max - 1.0);
    const double total = tail_from_profile(p, g, 0.0);
    if (edge > 1e-12 * std::max(total, std::numeric_limits<double>::min()))
      fail(ErrorKind::margin_too_small, "fiber grid does not extend far enough beyond L");
  }
  return tail_from_profile(p, g, L) + beyond_grid(mode, family, std::max(L, g.x_max));
}

cplx continuation_eval(const ModeFunction& mode, const OverlapKernel& kernel, cplx y) {
  const auto& k = kernel.k_grid();
  const auto w = trapezoid_weights(k);
  const std::size_t m = k.size();
  std::vector<cplx> a(m), b(m);
  for (std::size_t j = 0; j < m; ++j) {
    const cplx f = mode.samples()[j];
    a[j] = w[j] * f * std::exp(cplx(0.0, 1.0) * k[j] * y);
    b[j] = w[j] * std::conj(f) * std::exp(-cplx(0.0, 1.0) * k[j] * y);
  }
  cplx s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (a[j] == cplx(0.0)) continue;
    cplx row = 0.0;
    for (std::size_t l = 0; l < m; ++l) row += kernel(j, l) * b[l];
    s += a[j] * row;
  }
  return s / (2.0 * std::numbers::pi);
}

}  // namespace

double theorem_beta_bound(double alpha) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  const double r = std::sqrt(2.0 * alpha + 1.0);
  return std::min(1.0, (2.0 * alpha + 1.0) / (1.0 + r));
}

double split_gamma(double alpha, double beta) {
  require(alpha >= 0.0 && beta > 0.0 && beta < 1.0, "need alpha >= 0 and beta in (0,1)");
  return std::sqrt(beta) / (1.0 + std::sqrt(2.0 * alpha + 1.0));
}

double balanced_gamma(double alpha, double beta) {
  require(alpha >= 0.0 && beta > 0.0 && beta < 1.0, "need alpha >= 0 and beta in (0,1)");
  const double sb = std::sqrt(beta);
  return sb / (sb + std::sqrt(2.0 * alpha + 1.0));
}

SplitExponents split_exponents(double alpha, double beta, double gamma) {
  SplitExponents e;
  e.gamma = gamma;
  e.high_k = (2.0 * alpha + 1.0) * gamma * gamma;
  e.low_k = beta * (1.0 - gamma) * (1.0 - gamma);
  return e;
}

double tail_mass(const ModeFunction& mode, const FiberFamily& family, double L) {
  check_family(mode, family);
  return tail_mass_impl(mode, family, profile_on_nodes(mode, family), L);
}

std::string DecayProfile::csv() const {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < L_grid.size(); ++i)
    rows.push_back({L_grid[i], tail_mass[i], tail_mass[i] > 0.0 ? std::log(tail_mass[i]) : -INFINITY});
  return csv_table({"L", "tail", "log_tail"}, rows);
}

DecayProfile decay_certificate(const ModeFunction& mode, const FiberFamily& family, const BandTable& band,
                               const DecayOptions& opt) {
  check_family(mode, family);
  require(mode.n() == band.n(), "mode and band belong to different bands");
  require(opt.L_lo >= 0.0 && opt.L_hi > opt.L_lo && opt.L_step > 0.0, "invalid L window");
  const bool compact = mode.support().bounded() && mode.support().hi < band.k_floor();
  if (!compact) {
    const MembershipReport r = membership_report(mode, band, opt.alpha, opt.alpha + 1.0);
    if (r.verdict != Verdict::in)
      fail(ErrorKind::membership_violation, "mode fails membership at the requested alpha (" + r.reason + ")");
  }

  DecayProfile prof;
  prof.fit_lo = opt.L_lo;
  prof.fit_hi = opt.L_hi;
  prof.abscissa_shift = compact ? mode.support().hi : 0.0;
  const auto steps = static_cast<std::size_t>(std::llround((opt.L_hi - opt.L_lo) / opt.L_step));
  const std::vector<double> p = profile_on_nodes(mode, family);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double L = i == steps ? opt.L_hi : opt.L_lo + opt.L_step * static_cast<double>(i);
    prof.L_grid.push_back(L);
    prof.tail_mass.push_back(tail_mass_impl(mode, family, p, L));
  }
  for (std::size_t i = 1; i < prof.tail_mass.size(); ++i)
    prof.tail_mass[i] = std::min(prof.tail_mass[i], prof.tail_mass[i - 1]);

  if (!(prof.tail_mass.back() > 0.0))
    fail(ErrorKind::degenerate_fit, "tail mass underflows inside the fit window");
  prof.decades = std::log10(prof.tail_mass.front() / prof.tail_mass.back());
  if (prof.decades < 4.0) fail(ErrorKind::degenerate_fit, "tail mass spans fewer than 4 decades");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(prof.L_grid.size());
  for (std::size_t i = 0; i < prof.L_grid.size(); ++i) {
    const double d = prof.L_grid[i] - prof.abscissa_shift;
    const double x = d * d, y = -std::log(prof.tail_mass[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  prof.fitted_beta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  prof.theorem_bound = theorem_beta_bound(opt.alpha);
  prof.pass = prof.fitted_beta >= prof.theorem_bound;
  prof.gamma_paper = split_gamma(opt.alpha, opt.beta_split);
  prof.split_paper = split_exponents(opt.alpha, opt.beta_split, prof.gamma_paper);
  prof.split_balanced = split_exponents(opt.alpha, opt.beta_split, balanced_gamma(opt.alpha, opt.beta_split));
  prof.split_consistent = std::abs(prof.split_balanced.high_k - prof.split_balanced.low_k) <=
                          opt.split_tolerance * prof.split_balanced.low_k;
  return prof;
}

EnvelopeCheck agmon_envelope(const Eigenpair& pair, double beta) {
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
  EnvelopeCheck c;
  c.n = pair.n;
  c.k = pair.k;
  c.beta = beta;
  c.negative_branch = pair.k <= 0.0;
  c.x_n = std::sqrt(4.0 * pair.n - 1.0);
  const auto& u = pair.u;
  const FiberGrid& g = pair.grid;
  for (double v : u) c.sup_norm = std::max(c.sup_norm, std::abs(v));
  c.sup_bound = std::sqrt(2.0) * std::pow(pair.lambda, 0.25);

  if (c.negative_branch) {
    c.sup_pass = c.sup_norm <= c.sup_bound;
    const double d = c.x_n - pair.k;
    const double a = std::sqrt(2.0 * d), b = (2.0 / 3.0) * std::sqrt(1.0 - beta * beta) * std::sqrt(d);
    c.margin = c.sharp_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.n_points; ++i) {
      const double x = g.x(i);
      if (x < c.x_n) continue;
      const double t = x - c.x_n;
      const double gauss = 0.5 * beta * t * t, mid = b * std::pow(t, 1.5);
      c.margin = std::min(c.margin, a * std::exp(mid - gauss) - std::abs(u[i]));
      c.sharp_margin = std::min(c.sharp_margin, a * std::exp(-mid - gauss) - std::abs(u[i]));
      ++c.points;
    }
    c.pass = c.points > 0 && c.margin >= -1e-10;
  }
  if (pair.k >= 0.0) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i) {
      if (u[i] == 0.0) continue;
      const double x = g.x(i);
      best = std::max(best, std::exp(std::log(std::abs(u[i])) + 0.5 * beta * (x - pair.k) * (x - pair.k)));
    }
    c.empirical_constant = best;
    if (!c.negative_branch) {
      c.points = g.n_points;
      c.pass = std::isfinite(best);
    }
  }
  return c;
}

OverlapKernel OverlapKernel::build(const FiberFamily& family) {
  OverlapKernel K;
  K.k_ = family.k_grid();
  const FiberGrid& g = family.grid();
  const auto nk = static_cast<Eigen::Index>(K.k_.size());
  const auto nx = static_cast<Eigen::Index>(g.n_points);
  Eigen::MatrixXd V(nx, nk);
  for (Eigen::Index j = 0; j < nk; ++j) {
    const auto& u = family.u(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double w = (i == 0 || i == nx - 1) ? 0.5 * g.h : g.h;
      V(i, j) = std::sqrt(w) * u[static_cast<std::size_t>(i)];
    }
  }
  const Eigen::MatrixXd F = V.transpose() * V;
  K.F_.resize(K.k_.size() * K.k_.size());
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index j = i; j < nk; ++j) {
      const double v = F(i, j);
      K.F_[static_cast<std::size_t>(i * nk + j)] = v;
      K.F_[static_cast<std::size_t>(j * nk + i)] = v;
    }
  return K;
}

double OverlapKernel::max_abs() const {
  double m = 0.0;
  for (double v : F_) m = std::max(m, std::abs(v));
  return m;
}

double OverlapKernel::diagonal_error() const {
  double m = 0.0;
  for (std::size_t i = 0; i < k_.size(); ++i) m = std::max(m, std::abs((*this)(i, i) - 1.0));
  return m;
}

double OverlapKernel::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < k_.size(); ++i)
    for (std::size_t j = i + 1; j < k_.size(); ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

std::string OverlapKernel::csv() const {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < k_.size(); ++i)
    for (std::size_t j = 0; j < k_.size(); ++j) rows.push_back({k_[i], k_[j], (*this)(i, j)});
  return csv_table({"k", "k_prime", "F"}, rows);
}

cplx analytic_continuation(const ModeFunction& mode, const OverlapKernel& kernel, cplx y) {
  require(mode.k_grid() == kernel.k_grid(), "mode and kernel must share the k-grid");
  require(std::isfinite(y.real()) && std::isfinite(y.imag()), "y must be finite");
  require(y.imag() <= 0.0, "continuation is defined for Im y <= 0");
  const double s = -y.imag();
  const auto& k = kernel.k_grid();
  double peak = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j)
    peak = std::max(peak, std::abs(mode.samples()[j]) * std::exp(s * std::abs(k[j])));
  const double ends = std::max(std::abs(mode.samples().front()) * std::exp(s * std::abs(k.front())),
                               std::abs(mode.samples().back()) * std::exp(s * std::abs(k.back())));
  if (!std::isfinite(peak) || ends > 1e-6 * peak)
    fail(ErrorKind::domination_failure, "mode tail too heavy for the requested Im y");
  return continuation_eval(mode, kernel, y);
}

double cauchy_riemann_residual(const ModeFunction& mode, const OverlapKernel& kernel, cplx y, double radius) {
  require(radius > 0.0, "stencil radius must be positive");
  const cplx centre = analytic_continuation(mode, kernel, y);
  const cplx du = (continuation_eval(mode, kernel, y + radius) - continuation_eval(mode, kernel, y - radius)) /
                  (2.0 * radius);
  const cplx dv = (continuation_eval(mode, kernel, y + cplx(0.0, radius)) -
                   continuation_eval(mode, kernel, y - cplx(0.0, radius))) /
                  (2.0 * radius);
  return std::abs(dv - cplx(0.0, 1.0) * du) / std::max(1.0, std::abs(centre));
}

double harmonic_norm_direct(const ModeFunction& mode, const FiberFamily& family, double y) {
  check_family(mode, family);
  const FiberGrid& g = family.grid();
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < g.n_points; ++i) s += g.h * std::norm(synthesize_harmonic(mode, family, g.x(i), y));
  return s;
}

}  // namespace edgelap
