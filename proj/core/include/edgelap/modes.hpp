#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "edgelap/band.hpp"
#include "edgelap/fiber.hpp"
#include "edgelap/quadrature.hpp"

namespace edgelap {

enum class ModeKind {
  gaussian,          // a exp(-(k-k0)^2/w^2), truncated at |k-k0| = 6w
  bump,              // a exp(1 - 1/(1-s^2)), s = (k-k0)/w, support [k0-w, k0+w]
  threshold_flat,    // a chi(k) |lambda_n'(k)|^{1/2}
  threshold_holder,  // a chi(k) |lambda_n'(k)|^{1/2} (lambda_n(k)-E_n)^p
  custom,            // interpolated samples
};

const char* to_string(ModeKind kind) noexcept;

struct ModeDescriptor {
  ModeKind kind = ModeKind::gaussian;
  int n = 1;
  double k0 = 0.0;
  double width = 0.5;
  cplx amplitude = 1.0;
  double exponent = 0.5;  // p for threshold_holder

  // "bump:n=1,k0=1.5,w=0.3", "gauss:n=2,k0=0,w=0.5,a=1", "flat:n=1", "holder:n=1,p=0.5".
  static ModeDescriptor parse(const std::string& text);
  std::string to_string() const;
  // JSON object {"kind", "n", "k0", "w", "a_re", "a_im", "p"}.
  static ModeDescriptor from_json(const std::string& json_text);
  std::string to_json() const;
  bool needs_band() const { return kind == ModeKind::threshold_flat || kind == ModeKind::threshold_holder; }
};

struct Support {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

// n-th Fourier coefficient k -> f_n(k), sampled on a k-grid and (when known)
// evaluable in closed form between samples.
class ModeFunction {
 public:
  ModeFunction() = default;
  ModeFunction(int n, std::vector<double> k_grid, std::function<cplx(double)> eval, Support support,
               std::optional<ModeDescriptor> descriptor = std::nullopt);

  static ModeFunction from_descriptor(const ModeDescriptor& d, const std::vector<double>& k_grid,
                                      BandTablePtr band = nullptr);
  // Cubic interpolation of the samples; zero outside the grid.
  static ModeFunction from_samples(int n, std::vector<double> k_grid, std::vector<cplx> samples);
  static ModeFunction zero(int n, std::vector<double> k_grid);

  int n() const { return n_; }
  const std::vector<double>& k_grid() const { return k_; }
  const std::vector<cplx>& samples() const { return samples_; }
  const Support& support() const { return support_; }
  const std::optional<ModeDescriptor>& descriptor() const { return descriptor_; }

  cplx operator()(double k) const;
  double norm_squared() const;  // trapezoid over the k-grid
  double sup_abs() const;
  ModeFunction scaled(cplx s) const;
  // CSV k,re,im.
  std::string csv() const;

 private:
  int n_ = 1;
  std::vector<double> k_;
  std::vector<cplx> samples_;
  std::function<cplx(double)> eval_;
  Support support_;
  std::optional<ModeDescriptor> descriptor_;
};

// k-support implied by a descriptor (threshold kinds run to the band's tail floor).
Support descriptor_support(const ModeDescriptor& d, const BandTable* band);
// Uniform grid with step close to `step` covering the descriptor's support.
std::vector<double> mode_k_grid(const ModeDescriptor& d, const BandTable* band, double step = 0.02);

// Eigenfunctions u_n(., k_j) for one band on a shared x-grid.
class FiberFamily {
 public:
  static FiberFamily solve(int n, std::vector<double> k_grid, const Discretization& disc);

  int n() const { return n_; }
  const std::vector<double>& k_grid() const { return k_; }
  const FiberGrid& grid() const { return grid_; }
  const std::vector<double>& u(std::size_t j) const { return u_[j]; }
  double lambda(std::size_t j) const { return lambda_[j]; }
  // u_n(x, k_j) by four-point Lagrange interpolation in x (0 beyond x_max).
  double u_at(std::size_t j, double x) const;

 private:
  int n_ = 1;
  std::vector<double> k_;
  FiberGrid grid_;
  std::vector<std::vector<double>> u_;
  std::vector<double> lambda_;
};

// Discretization shared by all families needed for the given modes.
Discretization common_discretization(const std::vector<ModeFunction>& modes, const Discretization& base);

// Samples f(x_i, y_j) on [0, X] x [-Y, Y]; x_i on the fiber grid with a stride.
struct HalfPlaneFunction {
  std::vector<ModeFunction> modes;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<cplx> values;  // row-major: values[i * y.size() + j] = f(x_i, y_j)

  bool has_grid() const { return !values.empty(); }
  cplx at(std::size_t i, std::size_t j) const { return values[i * y.size() + j]; }
  static HalfPlaneFunction from_function(std::vector<double> x, std::vector<double> y,
                                         const std::function<cplx(double, double)>& f);
};

struct FieldSpec {
  std::size_t x_stride = 4;
  double y_max = 20.0;
  double y_step = 0.05;
};

// Pi_n f(x, y) = (2 pi)^{-1/2} int e^{iky} f_n(k) u_n(x, k) dk (unitary partial Fourier convention).
cplx synthesize_harmonic(const ModeFunction& mode, const FiberFamily& family, double x, double y);

// Sum of harmonics sampled on a rectangle; families[i] must match modes[i] (same n, same k-grid).
HalfPlaneFunction synthesize_field(const std::vector<ModeFunction>& modes, const std::vector<FiberFamily>& families,
                                   const FieldSpec& spec = {});

// f_n(k_j) = < F_y f(., k_j), u_n(., k_j) > on the family's k-grid.
ModeFunction project_mode(const HalfPlaneFunction& f, const FiberFamily& family);

// ||Pi_n f(x, .)||^2_{L^2(R)} = int u_n(x,k)^2 |f_n(k)|^2 dk.
double harmonic_profile(const ModeFunction& mode, const FiberFamily& family, double x);

// (int (1+y^2)^s |f|^2 dx dy)^{1/2} by the trapezoid rule on the sample grid.
double weighted_norm(const HalfPlaneFunction& f, double s);

enum class Verdict { in, out, undecided };
const char* to_string(Verdict v) noexcept;

struct MembershipReport {
  int n = 1;
  double alpha = 0.0;
  double s = 1.0;
  double vanishing_value = 0.0;  // |mu_n f~_n| at the smallest resolvable energy above E_n
  double vanishing_tolerance = 0.0;
  double tail_exponent = 0.0;    // fitted gamma in |mu_n f~_n| ~ C (lambda - E_n)^gamma
  double tail_constant = 0.0;
  double holder_constant_estimate = 0.0;  // inf when the fit rules out alpha-Holder behaviour
  double w_alpha_sup = 0.0;               // inf when w_n^alpha |f_n| grows into the tail
  std::size_t regression_nodes = 0;
  Verdict verdict = Verdict::undecided;
  std::string reason;
};

// mu_n f~_n at energy lam (0 below the tail floor for modes with bounded support).
cplx transported_mode(const ModeFunction& mode, const BandTable& band, double lam);

MembershipReport membership_report(const ModeFunction& mode, const BandTable& band, double alpha, double s);

}  // namespace edgelap
