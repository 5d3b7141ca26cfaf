#pragma once

#include <memory>
#include <string>
#include <vector>

#include "edgelap/fiber.hpp"
#include "edgelap/interp.hpp"

namespace edgelap {

// C_n = 2^n / ((n-1)! sqrt(pi)).
double asymptotic_constant(int n);

struct AsymptoticModel {
  int n = 1;
  double C_n = 0.0;
  double alpha = 0.0;
  double C_n_alpha = 0.0;  // C_n^{-alpha-1/2} 2^{-1/2}
};

AsymptoticModel asymptotic_model(int n, double alpha);

// Leading-order tail predictions: lambda_n - E_n ~ C_n k^{2n-1} e^{-k^2},
// w_n^alpha(k) ~ C_{n,alpha} k^{-n(2 alpha+1)+alpha} e^{k^2 (alpha+1/2)}.
double gap_asymptotic(int n, double k);
double weight_w_alpha_asymptotic(int n, double k, double alpha);

// Default momentum grid: step 0.05 on [-4, 2], step 0.025 on (2, 4.5].
std::vector<double> default_k_grid();
std::vector<double> uniform_grid(double a, double b, double step);

class BandTable {
 public:
  static constexpr double gap_floor = 1e-12;

  static BandTable build(int n, std::vector<double> k_grid, const Discretization& disc = {});

  int n() const { return n_; }
  double threshold() const { return landau_level(n_); }
  const std::vector<double>& k_grid() const { return k_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<double>& lambda_prime() const { return lambda_prime_; }
  // Discrete Landau level of the solver grid minus E_n (subtracted from every node).
  double calibration_offset() const { return calibration_offset_; }
  const Discretization& discretization() const { return disc_; }

  double k_first() const { return k_.front(); }
  double k_last() const { return k_.back(); }
  // Momentum where the tail model reaches the gap floor.
  double k_floor() const { return k_floor_; }
  double lambda_max() const { return lambda_.front(); }

  double evaluate(double k) const;
  double gap(double k) const;  // lambda_n(k) - E_n, accurate for tiny gaps
  double log_gap(double k) const;
  double derivative(double k) const;
  // Right of the last node the tail model is used.
  bool model_derived(double k) const { return k > k_.back(); }

  double invert(double lam) const;
  double invert_gap(double gap) const;

  // Tail model log(gap) = log A + (2n-1) log k - k^2 + B/k^2, matched C^1 at the last node.
  double tail_log_a() const { return tail_log_a_; }
  double tail_b() const { return tail_b_; }

 private:
  int n_ = 1;
  std::vector<double> k_, lambda_, lambda_prime_;
  HermiteCubic log_gap_;
  double tail_log_a_ = 0.0, tail_b_ = 0.0, k_floor_ = 0.0;
  double calibration_offset_ = 0.0;
  Discretization disc_;
};

using BandTablePtr = std::shared_ptr<const BandTable>;

// Bands 1..n_max on a common grid.
std::vector<BandTablePtr> build_band_atlas(int n_max, const std::vector<double>& k_grid, const Discretization& disc = {});

double invert_band(const BandTable& table, double lam);
// mu_n(lam) = |lambda_n'(lambda_n^{-1}(lam))|^{-1/2}
double weight_mu(const BandTable& table, double lam);
// w_n^alpha(k) = |lambda_n(k) - E_n|^{-alpha} |lambda_n'(k)|^{-1/2}
double weight_w_alpha(const BandTable& table, double k, double alpha);

struct AsymptoticPoint {
  double k = 0.0;
  double gap_ratio = 0.0;         // (lambda - E_n) / (C_n k^{2n-1} e^{-k^2})
  double derivative_ratio = 0.0;  // -lambda' / (2 C_n k^{2n} e^{-k^2})
  double log_derivative = 0.0;    // lambda' / (lambda - E_n)
  double log_derivative_rel_dev = 0.0;  // |lambda'/(lambda - E_n) + 2k| / 2k
};

struct AsymptoticFit {
  int n = 1;
  double k_lo = 0.0, k_hi = 0.0;
  double C_n = 0.0;
  // Prefactors as least-squares intercepts of p(k) = C + D/k^2 over the window nodes.
  double gap_prefactor = 0.0;
  double derivative_prefactor = 0.0;
  double gap_prefactor_rel_error = 0.0;
  double derivative_prefactor_rel_error = 0.0;
  // Plain averages of the raw ratios, for reference.
  double gap_prefactor_mean = 0.0;
  double derivative_prefactor_mean = 0.0;
  std::vector<AsymptoticPoint> points;
};

AsymptoticFit asymptotic_check(const BandTable& table, double k_lo, double k_hi);
AsymptoticPoint asymptotic_point(const BandTable& table, double k);

// CSV with header k,lambda,lambda_prime,mu.
std::string band_table_csv(const BandTable& table);

}  // namespace edgelap
