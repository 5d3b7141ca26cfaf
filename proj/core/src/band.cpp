#include "edgelap/band.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "edgelap/error.hpp"
#include "edgelap/format.hpp"
#include "edgelap/parallel.hpp"

namespace edgelap {

namespace {

// Momentum where every band up to n = 6 has a true gap far below the floor;
// the discrete eigenvalue there measures the grid's own Landau level.
constexpr double kCalibrationMomentum = 9.0;

}  // namespace

double asymptotic_constant(int n) {
  require(n >= 1, "band index must be positive");
  return std::pow(2.0, n) / (std::tgamma(static_cast<double>(n)) * std::sqrt(std::numbers::pi));
}

AsymptoticModel asymptotic_model(int n, double alpha) {
  AsymptoticModel m;
  m.n = n;
  m.C_n = asymptotic_constant(n);
  m.alpha = alpha;
  m.C_n_alpha = std::pow(m.C_n, -alpha - 0.5) / std::sqrt(2.0);
  return m;
}

double gap_asymptotic(int n, double k) {
  return asymptotic_constant(n) * std::pow(k, 2 * n - 1) * std::exp(-k * k);
}

double weight_w_alpha_asymptotic(int n, double k, double alpha) {
  const AsymptoticModel m = asymptotic_model(n, alpha);
  return m.C_n_alpha * std::pow(k, -n * (2.0 * alpha + 1.0) + alpha) * std::exp(k * k * (alpha + 0.5));
}

std::vector<double> uniform_grid(double a, double b, double step) {
  require(b > a && step > 0.0, "invalid uniform grid");
  const auto m = static_cast<std::size_t>(std::llround((b - a) / step));
  require(std::abs(a + static_cast<double>(m) * step - b) <= 1e-9 * std::max(1.0, std::abs(b)),
          "grid step must divide the interval");
  std::vector<double> g(m + 1);
  for (std::size_t i = 0; i <= m; ++i) g[i] = a + static_cast<double>(i) * step;
  g.back() = b;
  return g;
}

std::vector<double> default_k_grid() {
  std::vector<double> g = uniform_grid(-4.0, 2.0, 0.05);
  const std::vector<double> right = uniform_grid(2.0, 4.5, 0.025);
  g.insert(g.end(), right.begin() + 1, right.end());
  return g;
}

BandTable BandTable::build(int n, std::vector<double> k_grid, const Discretization& disc) {
  require(n >= 1, "band index must be positive");
  require(k_grid.size() >= 4, "k-grid too short");
  for (std::size_t i = 0; i + 1 < k_grid.size(); ++i) require(k_grid[i + 1] > k_grid[i], "k-grid must increase");
  require(k_grid.back() > 0.0, "k-grid must reach into k > 0");
  disc.validate();

  BandTable t;
  t.n_ = n;
  t.k_ = std::move(k_grid);
  t.disc_ = discretization_for(t.k_, n, disc);
  const std::size_t m = t.k_.size();
  std::vector<double> raw(m);
  t.lambda_prime_.assign(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const auto pairs = solve_fiber_fixed(t.k_[i], n, t.disc_);
    raw[i] = pairs[static_cast<std::size_t>(n - 1)].lambda;
    t.lambda_prime_[i] = band_derivative(pairs[static_cast<std::size_t>(n - 1)]);
  });
  const Discretization cal = t.disc_.enlarged_for(kCalibrationMomentum, n);
  const double lam_ref = solve_fiber(kCalibrationMomentum, n, cal)[static_cast<std::size_t>(n - 1)].lambda;
  const double E = landau_level(n);
  t.calibration_offset_ = lam_ref - E;

  std::vector<double> ell(m), slope(m);
  t.lambda_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double gap = raw[i] - lam_ref;
    if (!(gap > 0.0))
      fail(ErrorKind::monotonicity_violation, "band " + std::to_string(n) + " not above its Landau level at k=" +
                                                  std::to_string(t.k_[i]));
    if (!(t.lambda_prime_[i] < 0.0))
      fail(ErrorKind::monotonicity_violation, "nonnegative band derivative at k=" + std::to_string(t.k_[i]));
    if (i > 0 && !(raw[i] < raw[i - 1]))
      fail(ErrorKind::monotonicity_violation, "band not decreasing at k=" + std::to_string(t.k_[i]));
    t.lambda_[i] = E + gap;
    ell[i] = std::log(gap);
    slope[i] = t.lambda_prime_[i] / gap;
  }
  t.log_gap_ = HermiteCubic(t.k_, ell, slope);

  // C^1 Gaussian tail model beyond the last node.
  const double kl = t.k_.back();
  const double p = 2.0 * n - 1.0;
  const double sl = t.log_gap_.slopes().back();
  t.tail_b_ = (p / kl - 2.0 * kl - sl) * kl * kl * kl / 2.0;
  t.tail_log_a_ = ell.back() - p * std::log(kl) + kl * kl - t.tail_b_ / (kl * kl);
  const double target = std::log(gap_floor);
  if (ell.back() <= target) {
    t.k_floor_ = kl;
  } else {
    double k = kl;
    for (int it = 0; it < 100; ++it) {
      const double f = t.tail_log_a_ + p * std::log(k) - k * k + t.tail_b_ / (k * k) - target;
      const double df = p / k - 2.0 * k - 2.0 * t.tail_b_ / (k * k * k);
      const double kn = k - f / df;
      if (std::abs(kn - k) < 1e-14) {
        k = kn;
        break;
      }
      k = kn;
    }
    t.k_floor_ = k;
  }
  return t;
}

double BandTable::log_gap(double k) const {
  if (!(k >= k_.front()))
    fail(ErrorKind::out_of_range, "momentum below the tabulated range");
  if (k <= k_.back()) return log_gap_(k);
  const double p = 2.0 * n_ - 1.0;
  return tail_log_a_ + p * std::log(k) - k * k + tail_b_ / (k * k);
}

double BandTable::gap(double k) const { return std::exp(log_gap(k)); }

double BandTable::evaluate(double k) const { return threshold() + gap(k); }

double BandTable::derivative(double k) const {
  if (!(k >= k_.front())) fail(ErrorKind::out_of_range, "momentum below the tabulated range");
  double dl;
  if (k <= k_.back()) {
    dl = log_gap_.derivative(k);
  } else {
    const double p = 2.0 * n_ - 1.0;
    dl = p / k - 2.0 * k - 2.0 * tail_b_ / (k * k * k);
  }
  return gap(k) * dl;
}

double BandTable::invert_gap(double g) const {
  if (!(g >= gap_floor)) fail(ErrorKind::out_of_range, "energy below the resolvable gap floor");
  const double target = std::log(g);
  const auto& ell = log_gap_.values();
  if (target > ell.front()) fail(ErrorKind::out_of_range, "energy above the tabulated range");
  if (target >= ell.back()) return log_gap_.inverse(target);
  // Newton on the tail model between the last node and k_floor.
  const double p = 2.0 * n_ - 1.0;
  double a = k_.back(), b = k_floor_ + 1e-9;
  double k = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double f = tail_log_a_ + p * std::log(k) - k * k + tail_b_ / (k * k) - target;
    if (f > 0.0) a = k;
    else b = k;
    const double df = p / k - 2.0 * k - 2.0 * tail_b_ / (k * k * k);
    double kn = k - f / df;
    if (!(kn > a && kn < b)) kn = 0.5 * (a + b);
    if (std::abs(kn - k) < 1e-15 * k) return kn;
    k = kn;
  }
  return k;
}

double BandTable::invert(double lam) const { return invert_gap(lam - threshold()); }

std::vector<BandTablePtr> build_band_atlas(int n_max, const std::vector<double>& k_grid, const Discretization& disc) {
  std::vector<BandTablePtr> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(std::make_shared<const BandTable>(BandTable::build(n, k_grid, disc)));
  return out;
}

double invert_band(const BandTable& table, double lam) { return table.invert(lam); }

double weight_mu(const BandTable& table, double lam) {
  return 1.0 / std::sqrt(std::abs(table.derivative(table.invert(lam))));
}

double weight_w_alpha(const BandTable& table, double k, double alpha) {
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0,1)");
  if (k > table.k_floor()) fail(ErrorKind::out_of_range, "momentum beyond the resolvable tail");
  return std::pow(table.gap(k), -alpha) / std::sqrt(std::abs(table.derivative(k)));
}

AsymptoticPoint asymptotic_point(const BandTable& table, double k) {
  const int n = table.n();
  const double C = asymptotic_constant(n);
  const double e = std::exp(-k * k);
  AsymptoticPoint pt;
  pt.k = k;
  const double g = table.gap(k), d = table.derivative(k);
  pt.gap_ratio = g / (C * std::pow(k, 2 * n - 1) * e);
  pt.derivative_ratio = -d / (2.0 * C * std::pow(k, 2 * n) * e);
  pt.log_derivative = d / g;
  pt.log_derivative_rel_dev = std::abs(pt.log_derivative + 2.0 * k) / (2.0 * k);
  return pt;
}

AsymptoticFit asymptotic_check(const BandTable& table, double k_lo, double k_hi) {
  require(k_hi > k_lo, "empty asymptotic window");
  require(k_lo >= 2.5 - 1e-12, "asymptotic window must start at k >= 2.5");
  if (k_hi > 6.0 || k_hi > table.k_last() + 1e-12)
    fail(ErrorKind::window_too_wide, "window reaches beyond the tabulated tail");
  AsymptoticFit fit;
  fit.n = table.n();
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.C_n = asymptotic_constant(table.n());
  for (double k : table.k_grid())
    if (k >= k_lo - 1e-12 && k <= k_hi + 1e-12) fit.points.push_back(asymptotic_point(table, k));
  if (fit.points.size() < 3) fail(ErrorKind::degenerate_fit, "fewer than three nodes in the asymptotic window");
  // Least squares of p = C + D t with t = 1/k^2.
  auto intercept = [&](auto get) {
    double st = 0, sp = 0, stt = 0, stp = 0;
    const double m = static_cast<double>(fit.points.size());
    for (const auto& pt : fit.points) {
      const double t = 1.0 / (pt.k * pt.k), p = get(pt);
      st += t;
      sp += p;
      stt += t * t;
      stp += t * p;
    }
    const double D = (m * stp - st * sp) / (m * stt - st * st);
    return (sp - D * st) / m;
  };
  fit.gap_prefactor = fit.C_n * intercept([](const AsymptoticPoint& p) { return p.gap_ratio; });
  fit.derivative_prefactor = fit.C_n * intercept([](const AsymptoticPoint& p) { return p.derivative_ratio; });
  double mg = 0, md = 0;
  for (const auto& pt : fit.points) {
    mg += pt.gap_ratio;
    md += pt.derivative_ratio;
  }
  fit.gap_prefactor_mean = fit.C_n * mg / static_cast<double>(fit.points.size());
  fit.derivative_prefactor_mean = fit.C_n * md / static_cast<double>(fit.points.size());
  fit.gap_prefactor_rel_error = std::abs(fit.gap_prefactor / fit.C_n - 1.0);
  fit.derivative_prefactor_rel_error = std::abs(fit.derivative_prefactor / fit.C_n - 1.0);
  return fit;
}

std::string band_table_csv(const BandTable& table) {
  std::string out = "k,lambda,lambda_prime,mu\n";
  const auto& k = table.k_grid();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double lp = table.lambda_prime()[i];
    out += format_double(k[i]) + "," + format_double(table.lambda()[i]) + "," + format_double(lp) + "," +
           format_double(1.0 / std::sqrt(std::abs(lp))) + "\n";
  }
  return out;
}

}  // namespace edgelap
