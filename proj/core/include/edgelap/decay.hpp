#pragma once

#include <complex>
#include <string>
#include <vector>

#include "edgelap/band.hpp"
#include "edgelap/fiber.hpp"
#include "edgelap/modes.hpp"

namespace edgelap {

// Upper end of the admissible beta range, min(1, (2a+1)/(1+sqrt(2a+1))).
double theorem_beta_bound(double alpha);
// k(L) = gamma L with gamma = sqrt(beta)/(1+sqrt(2a+1)).
double split_gamma(double alpha, double beta);
// gamma making the two exponents (2a+1) gamma^2 and beta (1-gamma)^2 equal.
double balanced_gamma(double alpha, double beta);

struct SplitExponents {
  double gamma = 0.0;
  double high_k = 0.0;  // (2a+1) gamma^2, from the decay of f_n above k(L)
  double low_k = 0.0;   // beta (1-gamma)^2, from the gaussian envelope below k(L)
};
SplitExponents split_exponents(double alpha, double beta, double gamma);

// int_L^inf ||Pi_n f(x,.)||^2 dx
double tail_mass(const ModeFunction& mode, const FiberFamily& family, double L);

struct DecayOptions {
  double alpha = 0.4;
  double L_lo = 3.0;
  double L_hi = 6.0;
  double L_step = 0.25;
  double beta_split = 0.75;  // beta used for the split predictions
  double split_tolerance = 0.05;
};

struct DecayProfile {
  std::vector<double> L_grid;
  std::vector<double> tail_mass;
  double fitted_beta = 0.0;
  double fit_lo = 0.0, fit_hi = 0.0;
  double abscissa_shift = 0.0;  // fit is against (L - shift)^2; shift = k_max for compact support
  double decades = 0.0;
  double theorem_bound = 0.0;
  bool pass = false;  // fitted_beta >= theorem_bound
  double gamma_paper = 0.0;
  SplitExponents split_paper;
  SplitExponents split_balanced;
  bool split_consistent = false;  // exponents agree at the configured (balanced) gamma

  std::string csv() const;  // L,tail,log_tail
};

DecayProfile decay_certificate(const ModeFunction& mode, const FiberFamily& family, const BandTable& band,
                               const DecayOptions& opt = {});

struct EnvelopeCheck {
  int n = 1;
  double k = 0.0;
  double beta = 0.0;
  bool negative_branch = true;  // k <= 0: explicit envelope; k >= 0: empirical gaussian constant
  double x_n = 0.0;
  double margin = 0.0;        // min over grid x >= x_n of envelope - |u|
  double sharp_margin = 0.0;  // same with the (2/3)-term entering with a minus sign
  std::size_t points = 0;
  bool pass = false;
  double empirical_constant = 0.0;  // max |u| e^{beta (x-k)^2 / 2}
  double sup_norm = 0.0;
  double sup_bound = 0.0;  // sqrt(2) lambda^{1/4}
  bool sup_pass = true;
};

EnvelopeCheck agmon_envelope(const Eigenpair& pair, double beta);

class OverlapKernel {
 public:
  static OverlapKernel build(const FiberFamily& family);

  const std::vector<double>& k_grid() const { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return F_[i * k_.size() + j]; }
  double max_abs() const;
  double diagonal_error() const;  // max |F(k,k) - 1|
  double asymmetry() const;
  bool valid() const { return max_abs() <= 1.0 + 1e-10 && diagonal_error() <= 1e-8 && asymmetry() == 0.0; }
  std::string csv() const;  // k,k',F

 private:
  std::vector<double> k_;
  std::vector<double> F_;
};

// ||Pi_n f(., y)||^2 continued to complex y with Im y <= 0.
cplx analytic_continuation(const ModeFunction& mode, const OverlapKernel& kernel, cplx y);

// |A_v - i A_u| / max(1, |A|) on a five-point cross of the given radius around y.
double cauchy_riemann_residual(const ModeFunction& mode, const OverlapKernel& kernel, cplx y, double radius = 1e-3);

// ||Pi_n f(., y)||^2 by synthesis on the fiber grid and trapezoid in x.
double harmonic_norm_direct(const ModeFunction& mode, const FiberFamily& family, double y);

}  // namespace edgelap
