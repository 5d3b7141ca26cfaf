#include "edgelap/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgelap/error.hpp"
#include "edgelap/format.hpp"
#include "edgelap/parallel.hpp"
#include "edgelap/quadrature.hpp"

namespace edgelap {

namespace {

constexpr double kCutProximity = 1e-6;
constexpr double kQuadTol = 1e-12;

struct Interval {
  double lo, hi;
  bool empty() const { return !(hi > lo); }
};

Interval k_support(const ModeFunction& m) {
  const Support& s = m.support();
  if (s.bounded()) return {std::max(s.lo, m.k_grid().front()), std::min(s.hi, m.k_grid().back())};
  return {m.k_grid().front(), m.k_grid().back()};
}

Interval joint_support(const ModeFunction& f, const ModeFunction& g, const BandTable& band) {
  const Interval a = k_support(f), b = k_support(g);
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (!r.empty() && r.lo < band.k_first())
    fail(ErrorKind::out_of_range, "mode support extends below the tabulated momentum range");
  return r;
}

void check_band(const ModeFunction& f, const ModeFunction& g, const BandTable& band) {
  require(f.n() == band.n() && g.n() == band.n(), "modes and band table belong to different bands");
}

cplx k_integral(const ModeFunction& f, const ModeFunction& g, const BandTable& band, cplx z, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double k) -> cplx {
    const cplx fg = f(k) * std::conj(g(k));
    if (fg == cplx(0.0)) return 0.0;
    return fg / (band.evaluate(k) - z);
  };
  std::vector<double> pts{lo, hi};
  const double gap = z.real() - band.threshold();
  if (gap > BandTable::gap_floor && z.real() < band.lambda_max()) {
    const double ks = band.invert(z.real());
    if (ks > lo && ks < hi) {
      const double slope = std::abs(band.derivative(ks));
      const double scale = std::min(std::max(std::abs(z.imag()), 1e-14) / slope, 0.25 * (hi - lo));
      pts = graded_points(lo, hi, ks, scale);
    }
  }
  // the band interpolant is only C^1 at its nodes
  for (double k : band.k_grid())
    if (k > lo && k < hi) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return integrate_panels(integrand, pts, kQuadTol).value;
}

void require_member(const ModeFunction& m, const BandTable& band, const LapOptions& opt) {
  const MembershipReport r = membership_report(m, band, opt.alpha, opt.s);
  if (r.verdict != Verdict::in)
    fail(ErrorKind::membership_violation,
         "mode " + std::to_string(m.n()) + " is not in the absorption space (" + r.reason +
             "); the boundary value near E_n requires mu_n f~_n to vanish at the threshold, so H_n(E_n) = 0");
}

struct BoundaryOutcome {
  BoundaryValue bv;
  LapMethod method;
};

BoundaryOutcome boundary_impl(const ModeFunction& f, const ModeFunction& g, const BandTable& band, double lambda,
                              Side side, const LapOptions& opt, bool check_membership) {
  check_band(f, g, band);
  require(std::isfinite(lambda), "lambda must be finite");
  const double E = band.threshold();
  BoundaryOutcome out{};
  out.bv.lambda = lambda;
  out.bv.side = side;
  if (lambda < E) {
    out.bv.value = out.bv.pv_part = rn_value(f, g, band, cplx(lambda, 0.0));
    out.method = LapMethod::k_space;
    return out;
  }
  if (lambda - E < BandTable::gap_floor) fail(ErrorKind::resolution_floor, "lambda at the resolvable floor above E_n");
  if (lambda >= band.lambda_max()) fail(ErrorKind::out_of_range, "lambda above the tabulated band range");

  const bool near = lambda - E < opt.threshold_window;
  double jlo, jhi, hint = 1.0;
  if (near) {
    if (check_membership && !opt.negative_control) {
      require_member(f, band, opt);
      require_member(g, band, opt);
    }
    jlo = E;
    jhi = std::min(std::max(E + opt.threshold_window, lambda + 0.5), band.lambda_max());
    hint = opt.alpha > 0.0 ? std::min(opt.alpha, 1.0) : 0.5;
  } else {
    const double delta = std::min(0.5, 0.5 * (lambda - E));
    jlo = lambda - delta;
    jhi = lambda + delta;
    if (jhi >= band.lambda_max()) fail(ErrorKind::out_of_range, "window around lambda leaves the tabulated range");
  }
  const double floor_e = E + BandTable::gap_floor;
  const auto psi = DensityFunction::from_function(
      jlo, jhi, [&](double mu) { return energy_density(f, g, band, std::max(mu, floor_e)); }, hint);
  out.bv = boundary_value(psi, lambda, side);

  // remainder: momenta whose energies lie outside J
  const Interval s = joint_support(f, g, band);
  cplx rest = 0.0;
  bool has_rest = false;
  if (!s.empty()) {
    const double ka = band.invert(jhi);
    if (ka > s.lo) {
      rest += k_integral(f, g, band, cplx(lambda, 0.0), s.lo, std::min(ka, s.hi));
      has_rest = true;
    }
    if (!near) {
      const double kb = band.invert(jlo);
      if (kb < s.hi) {
        rest += k_integral(f, g, band, cplx(lambda, 0.0), std::max(kb, s.lo), s.hi);
        has_rest = true;
      }
    }
  }
  out.bv.pv_part += rest;
  out.bv.value += rest;
  out.method = has_rest ? LapMethod::split : LapMethod::lambda_plemelj;
  return out;
}

const BandTable& band_for(const std::vector<BandTablePtr>& bands, int n) {
  require(n >= 1 && static_cast<std::size_t>(n) <= bands.size() && bands[static_cast<std::size_t>(n - 1)],
          "no band table for mode " + std::to_string(n));
  const BandTable& b = *bands[static_cast<std::size_t>(n - 1)];
  require(b.n() == n, "band atlas out of order");
  return b;
}

LapResult resolvent_impl(const ResolventQuery& q, const std::vector<BandTablePtr>& bands, const LapOptions& opt,
                         bool check_membership) {
  require(q.mode_cutoff >= 1, "mode cutoff must be positive");
  if (q.point.on_axis) require(q.point.re() >= landau_level(1) - 1.0, "real point must satisfy lambda >= E_1 - 1");
  LapResult res;
  std::map<int, double> f_high, g_high;
  for (const auto& m : q.f)
    if (m.n() > q.mode_cutoff) f_high[m.n()] += std::sqrt(m.norm_squared());
  for (const auto& m : q.g)
    if (m.n() > q.mode_cutoff) g_high[m.n()] += std::sqrt(m.norm_squared());

  for (const auto& fm : q.f) {
    if (fm.n() > q.mode_cutoff) continue;
    res.per_mode.emplace(fm.n(), cplx(0.0));
  }
  for (const auto& gm : q.g) {
    if (gm.n() > q.mode_cutoff) continue;
    res.per_mode.emplace(gm.n(), cplx(0.0));
  }
  for (auto& [n, value] : res.per_mode) {
    const BandTable& band = band_for(bands, n);
    LapMethod method = LapMethod::k_space;
    for (const auto& fm : q.f) {
      if (fm.n() != n) continue;
      for (const auto& gm : q.g) {
        if (gm.n() != n) continue;
        if (q.point.on_axis) {
          const auto o = boundary_impl(fm, gm, band, q.point.re(), q.point.side, opt, check_membership);
          value += o.bv.value;
          if (o.method != LapMethod::k_space) method = o.method;
        } else {
          value += rn_value(fm, gm, band, q.point.z);
        }
      }
    }
    res.method_tags[n] = method;
  }
  for (const auto& [n, v] : res.per_mode) res.value += v;

  double fh = 0.0, gh = 0.0;
  for (const auto& [n, v] : f_high) fh += v * v;
  for (const auto& [n, v] : g_high) gh += v * v;
  if (fh > 0.0 && gh > 0.0) {
    const double re = q.window ? q.window->re_hi : q.point.re();
    const double d = landau_level(q.mode_cutoff + 1) - re;
    res.tail_bound = d > 0.0 ? std::max(1.0 / d, 1.0 / (d * d)) * std::sqrt(fh * gh)
                             : std::numeric_limits<double>::infinity();
  }
  return res;
}

}  // namespace

const char* to_string(LapMethod m) noexcept {
  switch (m) {
    case LapMethod::k_space: return "k-space";
    case LapMethod::lambda_plemelj: return "lambda-space-plemelj";
    case LapMethod::split: return "split";
  }
  return "unknown";
}

cplx rn_value(const ModeFunction& f, const ModeFunction& g, const BandTable& band, cplx z) {
  check_band(f, g, band);
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "z must be finite");
  if (z.imag() == 0.0 && band.threshold() - z.real() <= kCutProximity)
    fail(ErrorKind::proximity_to_cut, "real z on or next to the band; give Im z or use the boundary value");
  const Interval s = joint_support(f, g, band);
  if (s.empty()) return 0.0;
  return k_integral(f, g, band, z, s.lo, s.hi);
}

cplx energy_density(const ModeFunction& f, const ModeFunction& g, const BandTable& band, double lam) {
  check_band(f, g, band);
  if (!(lam - band.threshold() >= BandTable::gap_floor) || lam >= band.lambda_max()) return 0.0;
  const double k = band.invert(lam);
  const cplx fg = f(k) * std::conj(g(k));
  if (fg == cplx(0.0)) return 0.0;
  return fg / std::abs(band.derivative(k));
}

BoundaryValue rn_boundary(const ModeFunction& f, const ModeFunction& g, const BandTable& band, double lambda,
                          Side side, const LapOptions& opt) {
  return boundary_impl(f, g, band, lambda, side, opt, true).bv;
}

LapResult resolvent_element(const ResolventQuery& q, const std::vector<BandTablePtr>& bands, const LapOptions& opt) {
  return resolvent_impl(q, bands, opt, true);
}

cplx spectral_projector_element(const std::vector<ModeFunction>& f, const std::vector<ModeFunction>& g, double a,
                                double b, const std::vector<BandTablePtr>& bands) {
  require(a < b, "spectral interval needs a < b");
  cplx total = 0.0;
  for (const auto& fm : f)
    for (const auto& gm : g) {
      if (fm.n() != gm.n()) continue;
      const BandTable& band = band_for(bands, fm.n());
      const Interval s = joint_support(fm, gm, band);
      if (s.empty()) continue;
      const double E = band.threshold();
      // energy support of the pair
      const double e_hi = band.evaluate(s.lo);
      const double e_lo = s.hi >= band.k_floor() ? E : band.evaluate(s.hi);
      const double lo = std::max({a, E, e_lo}), hi = std::min(b, e_hi);
      if (!(hi > lo)) continue;
      auto h = [&](double mu) { return energy_density(fm, gm, band, mu); };
      const double scale = std::max(lo - E, BandTable::gap_floor);
      total += integrate_panels(h, graded_points(lo, hi, lo, scale), 1e-10).value;
    }
  return total;
}

std::string HolderCertificate::csv() const {
  std::vector<std::vector<double>> rows;
  for (const auto& s : samples)
    rows.push_back({s.z.real(), s.z.imag(), side_sign(s.side), s.value.real(), s.value.imag()});
  return csv_table({"z_re", "z_im", "side", "re", "im"}, rows);
}

std::vector<cplx> holder_lattice(const Window& K, std::size_t n_samples, const std::vector<BandTablePtr>& bands) {
  require(K.re_hi > K.re_lo && K.im_lo >= 0.0 && K.im_hi > K.im_lo, "window must be a rectangle in the upper half-plane");
  require(n_samples >= 5, "certificate needs at least 5 samples per side");
  const std::size_t m_re = n_samples, m_im = (n_samples - 1) / 4 + 1, levels = (n_samples - 1) / 2;
  std::vector<double> thresholds;
  for (const auto& b : bands)
    if (b) thresholds.push_back(b->threshold());
  auto at_threshold = [&](double x) {
    for (double e : thresholds)
      if (std::abs(x - e) < 1e-9) return true;
    return false;
  };
  std::vector<cplx> pts;
  auto add = [&](cplx z) {
    if (z.imag() == 0.0 && at_threshold(z.real())) return;
    for (const auto& p : pts)
      if (std::abs(p - z) < 1e-14) return;
    pts.push_back(z);
  };
  for (std::size_t j = 0; j < m_im; ++j) {
    const double y = K.im_lo + (K.im_hi - K.im_lo) * static_cast<double>(j) / static_cast<double>(m_im - 1);
    for (std::size_t i = 0; i < m_re; ++i)
      add({K.re_lo + (K.re_hi - K.re_lo) * static_cast<double>(i) / static_cast<double>(m_re - 1), y});
  }
  std::vector<double> anchors{K.re_lo, K.re_hi};
  for (double e : thresholds)
    if (e > K.re_lo && e < K.re_hi) anchors.push_back(e);
  for (double x : anchors)
    for (std::size_t j = 1; j <= levels; ++j) {
      const double y = K.im_hi * std::ldexp(1.0, -static_cast<int>(j));
      if (y >= K.im_lo) add({x, y});
    }
  return pts;
}

HolderCertificate holder_certificate(const std::vector<ModeFunction>& f, const std::vector<ModeFunction>& g,
                                     const Window& K, const std::vector<BandTablePtr>& bands, std::size_t n_samples,
                                     const LapOptions& opt) {
  require(opt.alpha > 0.0 && opt.alpha < 1.0, "alpha must lie in (0,1)");
  require(!f.empty() && !g.empty(), "certificate needs test functions");
  int n_max = 1;
  for (const auto& m : f) n_max = std::max(n_max, m.n());
  for (const auto& m : g) n_max = std::max(n_max, m.n());

  // membership for every band whose threshold window meets K
  if (!opt.negative_control) {
    for (const auto* set : {&f, &g})
      for (const auto& m : *set) {
        const BandTable& band = band_for(bands, m.n());
        const double E = band.threshold();
        if (K.re_lo < E + opt.threshold_window && K.re_hi > E) require_member(m, band, opt);
      }
  }

  const std::vector<cplx> pts = holder_lattice(K, n_samples, bands);
  const std::size_t pairs = pts.size() * (pts.size() - 1) / 2;
  if (pairs > kHolderPairBudget)
    fail(ErrorKind::invalid_input, "sample pairs exceed the budget of 10^4; lower n_samples");

  std::vector<HolderSample> samples(2 * pts.size());
  parallel_for(samples.size(), [&](std::size_t idx) {
    const std::size_t i = idx / 2;
    const Side side = idx % 2 == 0 ? Side::plus : Side::minus;
    ResolventQuery q;
    q.f = f;
    q.g = g;
    q.mode_cutoff = n_max;
    const cplx z = pts[i];
    q.point = z.imag() == 0.0 ? SpectralPoint::boundary(z.real(), side)
                              : SpectralPoint::off_axis(side == Side::plus ? z : std::conj(z));
    samples[idx] = {q.point.z, side, resolvent_impl(q, bands, opt, false).value};
  });

  HolderCertificate cert;
  cert.alpha = opt.alpha;
  cert.pairs = pairs;
  std::vector<std::pair<cplx, cplx>> plus, minus;
  for (const auto& s : samples) (s.side == Side::plus ? plus : minus).emplace_back(s.z, s.value);
  cert.constant_plus = holder_constant(plus, opt.alpha);
  cert.constant_minus = holder_constant(minus, opt.alpha);
  cert.constant = std::max(cert.constant_plus, cert.constant_minus);
  cert.samples = std::move(samples);
  return cert;
}

}  // namespace edgelap
