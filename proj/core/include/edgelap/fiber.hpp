#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace edgelap {

// Landau level E_n = 2n - 1.
constexpr double landau_level(int n) { return 2.0 * n - 1.0; }

struct Discretization {
  double x_max = 18.0;
  std::size_t n_points = 3601;
  int refinement_factor = 2;

  double spacing() const { return x_max / static_cast<double>(n_points - 1); }
  void validate() const;
  // Same x_max, (n_points - 1) * refinement_factor + 1 nodes.
  Discretization refined() const;
  // Enlarges x_max (keeping h) so that x_max >= max(0,k) + 2 sqrt(2 n_max + 3) + 4.
  Discretization enlarged_for(double k, int n_max) const;
  // Smallest grid with the same spacing h reaching at least min_x_max.
  Discretization with_extent(double min_x_max) const;
};

// Common discretization for a set of momenta, so all solves share one x-grid.
Discretization discretization_for(std::span<const double> ks, int n_max, const Discretization& base);

struct FiberGrid {
  double x_max = 0.0;
  std::size_t n_points = 0;
  double h = 0.0;

  double x(std::size_t i) const { return static_cast<double>(i) * h; }
  bool operator==(const FiberGrid&) const = default;
};

struct Eigenpair {
  int n = 1;
  double k = 0.0;
  double lambda = 0.0;
  std::vector<double> u;  // samples at x_i = i h, i = 0..n_points-1, with u[0] = u[last] = 0
  int deriv_at_zero_sign = 1;
  FiberGrid grid;
};

// Eigenpairs n = 1..n_max of -u'' + (x-k)^2 u = lambda u, u(0) = 0, sorted by lambda.
std::vector<Eigenpair> solve_fiber(double k, int n_max, const Discretization& disc);

// Same but on an exactly prescribed grid (no enlargement or regrowth).
std::vector<Eigenpair> solve_fiber_fixed(double k, int n_max, const Discretization& disc);

// Trapezoidal inner product on the fiber grid (eigenfunctions are normalized in it).
double mass_inner(const std::vector<double>& u, const std::vector<double>& v, double h);

// Feynman-Hellmann derivative lambda_n'(k) = -2 int (x-k) u^2 dx.
double band_derivative(const Eigenpair& pair);

struct FiberIdentityEntry {
  int n = 0;
  double residual = 0.0;  // relative eigen-equation residual
  bool residual_pass = false;
  double energy = 0.0;  // ||u'||^2 + ||(x-k)u||^2
  double energy_rel_error = 0.0;
  bool energy_pass = false;
  double sup_norm = 0.0;
  double sup_bound = 0.0;  // sqrt(2) lambda^{1/4}; only asserted for k <= 0
  bool sup_applicable = false;
  bool sup_pass = true;
};

struct FiberIdentityReport {
  double k = 0.0;
  std::vector<FiberIdentityEntry> entries;
  double orthonormality_error = 0.0;
  bool orthonormality_pass = false;
  double tolerance = 1e-6;

  bool all_pass() const;
};

FiberIdentityReport fiber_identity_report(const std::vector<Eigenpair>& pairs, double tol = 1e-6);

}  // namespace edgelap
