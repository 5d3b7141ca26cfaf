#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgelap/band.hpp"
#include "edgelap/cauchy.hpp"
#include "edgelap/modes.hpp"

namespace edgelap {

enum class LapMethod { k_space, lambda_plemelj, split };
const char* to_string(LapMethod m) noexcept;

struct LapOptions {
  double alpha = 0.4;
  double s = 1.0;
  // Width of the threshold window (E_n, E_n + w) where membership is required.
  double threshold_window = 1.0;
  // Proceed without membership near thresholds (reports divergence instead of refusing).
  bool negative_control = false;
};

// Either an off-axis z or a boundary point (lambda, side).
struct SpectralPoint {
  cplx z{};
  bool on_axis = false;
  Side side = Side::plus;

  static SpectralPoint off_axis(cplx z) { return {z, false, Side::plus}; }
  static SpectralPoint boundary(double lambda, Side side) { return {cplx(lambda, 0.0), true, side}; }
  double re() const { return z.real(); }
};

// Compact rectangle [re_lo, re_hi] x [im_lo, im_hi] in the closed upper half-plane.
struct Window {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
};

struct ResolventQuery {
  std::vector<ModeFunction> f, g;
  SpectralPoint point;
  int mode_cutoff = 6;
  std::optional<Window> window;
};

struct LapResult {
  cplx value{};
  std::map<int, cplx> per_mode;
  std::map<int, LapMethod> method_tags;
  double tail_bound = 0.0;
};

// int f_n(k) conj(g_n(k)) / (lambda_n(k) - z) dk
cplx rn_value(const ModeFunction& f, const ModeFunction& g, const BandTable& band, cplx z);

// H_n = mu f~ conj(mu g~) on the energy axis; zero outside the joint energy support.
cplx energy_density(const ModeFunction& f, const ModeFunction& g, const BandTable& band, double lam);

BoundaryValue rn_boundary(const ModeFunction& f, const ModeFunction& g, const BandTable& band, double lambda,
                          Side side, const LapOptions& opt = {});

LapResult resolvent_element(const ResolventQuery& q, const std::vector<BandTablePtr>& bands,
                            const LapOptions& opt = {});

// <E(a,b) f, g>
cplx spectral_projector_element(const std::vector<ModeFunction>& f, const std::vector<ModeFunction>& g, double a,
                                double b, const std::vector<BandTablePtr>& bands);

struct HolderSample {
  cplx z{};
  Side side = Side::plus;
  cplx value{};
};

struct HolderCertificate {
  double alpha = 0.0;
  double constant = 0.0;  // max over both sides
  double constant_plus = 0.0;
  double constant_minus = 0.0;
  std::size_t pairs = 0;
  std::vector<HolderSample> samples;
  std::string csv() const;  // z_re,z_im,side,re,im
};

// Points of K used by the certificate: an n_samples x ((n_samples-1)/4+1) lattice plus
// approach sequences lambda + i eta_max 2^-j at the window ends and at thresholds inside K.
std::vector<cplx> holder_lattice(const Window& K, std::size_t n_samples, const std::vector<BandTablePtr>& bands);

constexpr std::size_t kHolderPairBudget = 10000;

HolderCertificate holder_certificate(const std::vector<ModeFunction>& f, const std::vector<ModeFunction>& g,
                                     const Window& K, const std::vector<BandTablePtr>& bands, std::size_t n_samples,
                                     const LapOptions& opt = {});

}  // namespace edgelap
