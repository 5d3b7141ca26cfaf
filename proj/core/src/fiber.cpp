#include "edgelap/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgelap/error.hpp"
#include "edgelap/tridiag.hpp"

namespace edgelap {

namespace {

constexpr double kBoundaryMassTol = 1e-8;
constexpr double kResidualTol = 1e-4;
constexpr int kMaxRegrowth = 4;

double potential(double x, double k) { return (x - k) * (x - k); }

double pencil_mass(const std::vector<double>& u, double h) {
  const std::size_t N = u.size();
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    s += 10.0 * u[i] * u[i];
    if (i + 2 < N) s += 2.0 * u[i] * u[i + 1];
  }
  return s * h / 12.0;
}

TridiagPencil assemble(double k, const FiberGrid& g) {
  const std::size_t m = g.n_points - 2;
  const double h = g.h;
  SymTridiag a, b;
  a.d.resize(m);
  a.e.resize(m - 1);
  b.d.assign(m, 10.0 * h / 12.0);
  b.e.assign(m - 1, h / 12.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double vi = potential(g.x(j + 1), k);
    a.d[j] = 2.0 / h + h / 12.0 * 10.0 * vi;
    if (j + 1 < m) {
      const double vn = potential(g.x(j + 2), k);
      a.e[j] = -1.0 / h + h / 12.0 * 0.5 * (vi + vn);
    }
  }
  return TridiagPencil(std::move(a), std::move(b));
}

// Rayleigh quotient with the stiffness part summed as squared differences.
double rayleigh(const std::vector<double>& u, double k, const FiberGrid& g) {
  const double h = g.h;
  const std::size_t N = g.n_points;
  double stiff = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double du = u[i + 1] - u[i];
    stiff += du * du / h;
  }
  double pot = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double vi = potential(g.x(i), k);
    pot += 10.0 * vi * u[i] * u[i];
    if (i + 2 < N) pot += (vi + potential(g.x(i + 1), k)) * u[i] * u[i + 1];
  }
  pot *= h / 12.0;
  return (stiff + pot) / pencil_mass(u, h);
}

// Numerov inverse iteration at a fixed shift. The pencil eigenvector is only
// second-order accurate at the nodes; the Numerov one is fourth-order.
std::vector<double> numerov_vector(double k, const FiberGrid& g, double sigma, std::vector<double> x) {
  const std::size_t m = g.n_points - 2;
  const double h = g.h;
  std::vector<double> sub(m - 1), diag(m), sup(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    diag[j] = 2.0 / h + 10.0 * h / 12.0 * (potential(g.x(j + 1), k) - sigma);
    if (j + 1 < m) {
      sup[j] = -1.0 / h + h / 12.0 * (potential(g.x(j + 2), k) - sigma);
      sub[j] = -1.0 / h + h / 12.0 * (potential(g.x(j + 1), k) - sigma);
    }
  }
  for (int it = 0; it < 2; ++it) {
    std::vector<double> rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
      double s = 10.0 * x[j];
      if (j > 0) s += x[j - 1];
      if (j + 1 < m) s += x[j + 1];
      rhs[j] = s * h / 12.0;
    }
    x = solve_tridiagonal(sub, diag, sup, std::move(rhs));
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::abs(v));
    if (!(mx > 0.0) || !std::isfinite(mx)) fail(ErrorKind::discretization_too_coarse, "Numerov iteration broke down");
    for (double& v : x) v /= mx;
  }
  return x;
}

double boundary_mass(const std::vector<double>& u, const FiberGrid& g) {
  const double x0 = g.x_max - 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < g.n_points; ++i)
    if (g.x(i) >= x0) s += u[i] * u[i];
  return s * g.h;
}

// Relative residual of -u'' + (V - lambda) u with a five-point second derivative.
double relative_residual(const Eigenpair& p) {
  const auto& u = p.u;
  const double h = p.grid.h;
  const std::size_t N = p.grid.n_points;
  double acc = 0.0;
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const double d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
    const double r = -d2 + (potential(p.grid.x(i), p.k) - p.lambda) * u[i];
    acc += r * r;
  }
  return std::sqrt(acc * h) / std::max(1.0, std::abs(p.lambda));
}

std::vector<Eigenpair> solve_on_grid(double k, int n_max, const FiberGrid& g) {
  const TridiagPencil pencil = assemble(k, g);
  std::vector<Eigenpair> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double sigma = pencil.bisect(static_cast<std::size_t>(n - 1));
    std::vector<double> w(g.n_points, 0.0);
    const std::vector<double> v0 = pencil.inverse_iteration(sigma, 3);
    std::copy(v0.begin(), v0.end(), w.begin() + 1);
    const double lam = rayleigh(w, k, g);
    const std::vector<double> v = numerov_vector(k, g, lam, v0);
    Eigenpair p;
    p.n = n;
    p.k = k;
    p.grid = g;
    p.lambda = lam;
    p.u.assign(g.n_points, 0.0);
    std::copy(v.begin(), v.end(), p.u.begin() + 1);
    double umax = 0.0;
    for (double x : p.u) umax = std::max(umax, std::abs(x));
    for (double x : p.u) {
      if (std::abs(x) > 1e-8 * umax) {
        if (x < 0.0)
          for (double& y : p.u) y = -y;
        break;
      }
    }
    const double nrm = std::sqrt(mass_inner(p.u, p.u, g.h));
    for (double& y : p.u) y /= nrm;
    p.deriv_at_zero_sign = 1;
    out.push_back(std::move(p));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i].lambda - out[i - 1].lambda > 1e-8))
      fail(ErrorKind::discretization_too_coarse, "eigenvalues not separated at k=" + std::to_string(k));
  return out;
}

FiberGrid grid_of(const Discretization& d) { return FiberGrid{d.x_max, d.n_points, d.spacing()}; }

}  // namespace

void Discretization::validate() const {
  require(x_max > 0.0, "x_max must be positive");
  require(n_points >= 200, "n_points must be at least 200");
  require(refinement_factor >= 1, "refinement_factor must be a positive integer");
  require(spacing() <= 0.02 + 1e-15, "grid spacing must not exceed 0.02");
}

Discretization Discretization::refined() const {
  Discretization r = *this;
  r.n_points = (n_points - 1) * static_cast<std::size_t>(refinement_factor) + 1;
  return r;
}

Discretization Discretization::enlarged_for(double k, int n_max) const {
  const double need = std::max(0.0, k) + 2.0 * std::sqrt(2.0 * n_max + 3.0) + 4.0;
  if (x_max >= need) return *this;
  return with_extent(need);
}

Discretization Discretization::with_extent(double min_x_max) const {
  const double h = spacing();
  const auto intervals = static_cast<std::size_t>(std::ceil(min_x_max / h - 1e-9));
  Discretization r = *this;
  r.n_points = intervals + 1;
  r.x_max = static_cast<double>(intervals) * h;
  return r;
}

Discretization discretization_for(std::span<const double> ks, int n_max, const Discretization& base) {
  double kmax = 0.0;
  for (double k : ks) kmax = std::max(kmax, k);
  return base.enlarged_for(kmax, n_max);
}

double mass_inner(const std::vector<double>& u, const std::vector<double>& v, double h) {
  const std::size_t N = u.size();
  double s = 0.5 * (u[0] * v[0] + u[N - 1] * v[N - 1]);
  for (std::size_t i = 1; i + 1 < N; ++i) s += u[i] * v[i];
  return s * h;
}

std::vector<Eigenpair> solve_fiber_fixed(double k, int n_max, const Discretization& disc) {
  require(n_max >= 1, "n_max must be at least 1");
  require(std::isfinite(k), "k must be finite");
  disc.validate();
  const FiberGrid g = grid_of(disc);
  auto pairs = solve_on_grid(k, n_max, g);
  for (const auto& p : pairs) {
    if (boundary_mass(p.u, g) > kBoundaryMassTol)
      fail(ErrorKind::truncation_too_small, "eigenfunction mass near x_max for n=" + std::to_string(p.n));
    if (relative_residual(p) > kResidualTol)
      fail(ErrorKind::discretization_too_coarse, "eigen-equation residual too large for n=" + std::to_string(p.n));
  }
  return pairs;
}

std::vector<Eigenpair> solve_fiber(double k, int n_max, const Discretization& disc) {
  require(n_max >= 1, "n_max must be at least 1");
  disc.validate();
  Discretization d = disc.enlarged_for(k, n_max);
  for (int attempt = 0;; ++attempt) {
    try {
      return solve_fiber_fixed(k, n_max, d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::truncation_too_small || attempt >= kMaxRegrowth) throw;
      d = d.with_extent(d.x_max + 4.0);
    }
  }
}

double band_derivative(const Eigenpair& p) {
  require(p.u.size() == p.grid.n_points && p.grid.n_points >= 3, "eigenpair samples do not match grid");
  const auto& u = p.u;
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) s += (p.grid.x(i) - p.k) * u[i] * u[i];
  return -2.0 * s * p.grid.h / mass_inner(u, u, p.grid.h);
}

bool FiberIdentityReport::all_pass() const {
  if (!orthonormality_pass) return false;
  for (const auto& e : entries)
    if (!e.residual_pass || !e.energy_pass || !e.sup_pass) return false;
  return true;
}

FiberIdentityReport fiber_identity_report(const std::vector<Eigenpair>& pairs, double tol) {
  require(!pairs.empty(), "no eigenpairs");
  const FiberGrid g = pairs.front().grid;
  const double k = pairs.front().k;
  for (const auto& p : pairs) require(p.grid == g && p.k == k, "pairs must share k and grid");

  FiberIdentityReport rep;
  rep.k = k;
  rep.tolerance = tol;
  const std::size_t N = g.n_points;
  const double h = g.h;
  for (const auto& p : pairs) {
    FiberIdentityEntry e;
    e.n = p.n;
    e.residual = relative_residual(p);
    e.residual_pass = e.residual <= tol;

    // Independent quadrature: fourth-order derivative stencils and the trapezoid rule.
    const auto& u = p.u;
    std::vector<double> du(N, 0.0);
    du[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
    du[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h);
    for (std::size_t i = 2; i + 2 < N; ++i) du[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
    du[N - 2] = (3.0 * u[N - 1] + 10.0 * u[N - 2] - 18.0 * u[N - 3] + 6.0 * u[N - 4] - u[N - 5]) / (12.0 * h);
    du[N - 1] = (25.0 * u[N - 1] - 48.0 * u[N - 2] + 36.0 * u[N - 3] - 16.0 * u[N - 4] + 3.0 * u[N - 5]) / (12.0 * h);
    double kin = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double w = (i == 0 || i + 1 == N) ? 0.5 * h : h;
      kin += w * du[i] * du[i];
      pot += w * potential(g.x(i), k) * u[i] * u[i];
    }
    e.energy = kin + pot;
    e.energy_rel_error = std::abs(e.energy - p.lambda) / p.lambda;
    e.energy_pass = e.energy_rel_error <= tol;

    for (double x : u) e.sup_norm = std::max(e.sup_norm, std::abs(x));
    e.sup_bound = std::sqrt(2.0) * std::pow(p.lambda, 0.25);
    e.sup_applicable = k <= 0.0;
    e.sup_pass = !e.sup_applicable || e.sup_norm <= e.sup_bound;
    rep.entries.push_back(e);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i; j < pairs.size(); ++j) {
      const double ip = mass_inner(pairs[i].u, pairs[j].u, h);
      worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  rep.orthonormality_error = worst;
  rep.orthonormality_pass = worst <= 1e-8;
  return rep;
}

}  // namespace edgelap
