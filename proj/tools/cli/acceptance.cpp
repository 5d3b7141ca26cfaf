#include "cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "cli/json_out.hpp"
#include "edgelap/band.hpp"
#include "edgelap/cauchy.hpp"
#include "edgelap/decay.hpp"
#include "edgelap/error.hpp"
#include "edgelap/fiber.hpp"
#include "edgelap/format.hpp"
#include "edgelap/lap.hpp"
#include "edgelap/modes.hpp"

namespace edgelap::cli {

namespace {

using clock_type = std::chrono::steady_clock;

struct Shared {
  std::vector<BandTablePtr> atlas;  // bands 1..4 on the default grid
  double atlas_seconds = 0.0;
  bool used = false;  // set when the current criterion touched the atlas

  const std::vector<BandTablePtr>& bands() {
    used = true;
    if (atlas.empty()) {
      const auto t0 = clock_type::now();
      atlas = build_band_atlas(4, default_k_grid());
      atlas_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
      built_now = true;
    }
    return atlas;
  }
  bool built_now = false;
};

Check at_most(std::string name, double value, double tol) { return {std::move(name), value <= tol, value, tol}; }
Check at_least(std::string name, double value, double tol) {
  return {std::move(name), value >= tol, value, tol, false, ">="};
}
Check holds(std::string name, bool ok, double value) { return {std::move(name), ok, value, 0.0, false, "holds"}; }

ModeFunction make_mode(const std::string& text, const std::vector<BandTablePtr>& bands) {
  const ModeDescriptor d = ModeDescriptor::parse(text);
  const BandTablePtr band = static_cast<std::size_t>(d.n) <= bands.size() ? bands[d.n - 1] : nullptr;
  return ModeFunction::from_descriptor(d, mode_k_grid(d, band.get()), band);
}

// 1: Landau anchors
void landau_anchors(Shared& s, CriterionResult& r) {
  const auto pairs = solve_fiber(0.0, 4, Discretization{});
  for (int n = 1; n <= 4; ++n) {
    const double exact = 4.0 * n - 1.0;
    r.checks.push_back(at_most("anchor_n" + std::to_string(n), std::abs(pairs[n - 1].lambda - exact) / exact, 1e-6));
  }
  for (const auto& b : s.bands()) {
    double min_gap = INFINITY;
    for (double v : b->lambda()) min_gap = std::min(min_gap, v - b->threshold());
    r.checks.push_back({"above_threshold_n" + std::to_string(b->n()), min_gap > 0.0, min_gap, 0.0, false, ">"});
  }
}

// 2: asymptotic constant
void asymptotic_constant_check(Shared& s, CriterionResult& r) {
  const auto fit1 = asymptotic_check(*s.bands()[0], 2.5, 3.5);
  const auto fit2 = asymptotic_check(*s.bands()[1], 2.5, 3.5);
  r.checks.push_back(at_most("prefactor_n1", fit1.gap_prefactor_rel_error, 0.05));
  r.checks.push_back(at_most("prefactor_n2", fit2.gap_prefactor_rel_error, 0.10));
}

// 3: derivative consistency
void derivative_consistency(Shared& s, CriterionResult& r) {
  constexpr double step = 1e-3;
  const Discretization disc;
  double worst = 0.0;
  for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const auto mid = solve_fiber(k, 1, disc);
    const auto lo = solve_fiber(k - step, 1, disc), hi = solve_fiber(k + step, 1, disc);
    const double fd = (hi[0].lambda - lo[0].lambda) / (2.0 * step);
    const double fh = band_derivative(mid[0]);
    worst = std::max(worst, std::abs(fh - fd) / std::abs(fd));
  }
  r.checks.push_back(at_most("fh_vs_fd", worst, 1e-5));
  const BandTable& b = *s.bands()[0];
  const double ratio = b.derivative(3.0) / b.gap(3.0);
  r.checks.push_back(at_most("log_derivative_k3", std::abs(ratio / -6.0 - 1.0), 0.02));
}

// 4: Plemelj closed forms
void plemelj_closed_forms(Shared&, CriterionResult& r) {
  const auto one = DensityFunction::constant(0.0, 1.0, 1.0);
  const cplx z1 = offaxis_cauchy(one, cplx(0.0, 1.0)).value;
  r.checks.push_back(at_most("log_one_plus_i", std::abs(z1 - std::log(cplx(1.0, 1.0))), 1e-10));
  const cplx b = boundary_value(one, 0.25, Side::minus).value;
  r.checks.push_back(at_most("log3_minus_ipi", std::abs(b - cplx(std::log(3.0), -std::numbers::pi)), 1e-10));

  std::vector<DensityFunction> densities{
      one,
      DensityFunction::from_function(0.0, 1.0, [](double t) { return cplx(t * t, t); }),
      DensityFunction::from_function(-1.0, 1.0, [](double t) { return cplx(std::exp(-1.0 / (1.0 - t * t)), 0.0); }),
      DensityFunction::from_function(0.0, 1.0, [](double t) { return cplx(std::sqrt(std::abs(t - 0.3)), 0.0); }, 0.5),
  };
  double worst = 0.0;
  for (const auto& d : densities)
    for (double u : {0.2, 0.5, 0.7}) {
      const double lam = d.a + u * (d.b - d.a);
      const cplx jump = boundary_value(d, lam, Side::plus).value - boundary_value(d, lam, Side::minus).value;
      worst = std::max(worst, std::abs(jump - cplx(0.0, 2.0 * std::numbers::pi) * d(lam)));
    }
  r.checks.push_back(at_most("jump_identity", worst, 1e-8));
}

// 5: epsilon sweep
void epsilon_sweep_check(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  const ModeFunction f = make_mode("bump:n=1,k0=1.1,w=0.8", bands);
  double violations = 0.0, final_gap = 0.0;
  for (double lam : {1.2, 2.0}) {
    const cplx limit = rn_boundary(f, f, *bands[0], lam, Side::plus).value;
    double prev = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      const double d = std::abs(rn_value(f, f, *bands[0], cplx(lam, eps)) - limit);
      if (d > prev) violations += 1.0;
      prev = d;
    }
    final_gap = std::max(final_gap, prev);
  }
  r.checks.push_back(at_most("monotone_violations", violations, 0.0));
  r.checks.push_back(at_most("final_gap", final_gap, 1e-6));
}

// 6: Parseval
void parseval(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  std::vector<ModeFunction> modes{make_mode("gauss:n=1,k0=0.5,w=0.5", bands),
                                  make_mode("gauss:n=2,k0=-0.5,w=0.6,a=0.5+0.5i", bands),
                                  make_mode("gauss:n=3,k0=0,w=0.5,a=0-0.8i", bands)};
  const Discretization disc = common_discretization(modes, Discretization{});
  std::vector<FiberFamily> families;
  double expected = 0.0;
  for (const auto& m : modes) {
    families.push_back(FiberFamily::solve(m.n(), m.k_grid(), disc));
    expected += m.norm_squared();
  }
  const HalfPlaneFunction field = synthesize_field(modes, families, FieldSpec{});
  const double norm = weighted_norm(field, 0.0);
  r.checks.push_back(at_most("parseval", std::abs(norm * norm / expected - 1.0), 1e-4));
}

// 7: spectral projector
void spectral_projector(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  const ModeFunction f = make_mode("bump:n=1,k0=1.1,w=0.8", bands);
  const double lambda_cut = bands[0]->evaluate(f.support().lo) + 1.0;
  const cplx full = spectral_projector_element({f}, {f}, landau_level(1), lambda_cut, bands);
  r.checks.push_back(at_most("full_mass", std::abs(full / f.norm_squared() - 1.0), 1e-3));
  const cplx below = spectral_projector_element({f}, {f}, -5.0, landau_level(1), bands);
  r.checks.push_back(at_most("below_threshold", std::abs(below), 1e-12));
}

// 8: threshold LAP certificate
void threshold_certificate(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  const Window K{0.9, 1.5, 0.0, 0.1};
  const ModeFunction member = make_mode("holder:n=1,p=0.5", bands);
  const double coarse = holder_certificate({member}, {member}, K, bands, 9).constant;
  const double fine = holder_certificate({member}, {member}, K, bands, 17).constant;
  r.checks.push_back(holds("finite", std::isfinite(coarse) && std::isfinite(fine), fine));
  r.checks.push_back(at_most("refinement_change", std::abs(fine / coarse - 1.0), 0.2));

  LapOptions control;
  control.negative_control = true;
  const ModeFunction flat = make_mode("flat:n=1", bands);
  const double E = landau_level(1);
  const Window shrunk{E - (E - K.re_lo) / 4.0, E + (K.re_hi - E) / 4.0, 0.0, K.im_hi / 4.0};
  const double wide = holder_certificate({flat}, {flat}, K, bands, 9, control).constant;
  const double narrow = holder_certificate({flat}, {flat}, shrunk, bands, 9, control).constant;
  r.checks.push_back(at_least("negative_control_growth", narrow / wide, 10.0));
}

// 9: decay
void decay(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  const ModeFunction f = make_mode("bump:n=1,k0=0.5,w=0.5", bands);
  const FiberFamily family = FiberFamily::solve(1, f.k_grid(), common_discretization({f}, Discretization{}));
  DecayOptions opt;
  opt.alpha = 0.4;
  opt.L_lo = 3.0;
  opt.L_hi = 6.0;
  const DecayProfile p = decay_certificate(f, family, *bands[0], opt);
  r.checks.push_back(at_least("fitted_beta", p.fitted_beta, 0.7));
  r.checks.push_back(at_most("theorem_bound", std::abs(p.theorem_bound - 0.7687), 1e-4));
}

// 10: Agmon envelopes
void agmon(Shared&, CriterionResult& r) {
  double margin = INFINITY, sup_ratio = 0.0;
  for (double k : {-3.0, -1.0, 0.0}) {
    const auto pairs = solve_fiber(k, 1, Discretization{});
    for (double beta : {0.5, 0.75}) {
      const EnvelopeCheck c = agmon_envelope(pairs[0], beta);
      margin = std::min(margin, c.pass ? std::max(c.margin, 0.0) : c.margin);
      sup_ratio = std::max(sup_ratio, c.sup_norm / c.sup_bound);
    }
  }
  r.checks.push_back(at_least("envelope_margin", margin, -1e-10));
  r.checks.push_back(at_most("sup_bound_ratio", sup_ratio, 1.0));
}

// 11: overlap kernel and continuation
void overlap(Shared& s, CriterionResult& r) {
  const auto& bands = s.bands();
  const ModeFunction f = make_mode("gauss:n=1,k0=0.5,w=0.5", bands);
  const FiberFamily family = FiberFamily::solve(1, f.k_grid(), common_discretization({f}, Discretization{}));
  const OverlapKernel K = OverlapKernel::build(family);
  r.checks.push_back(at_most("kernel_bound", K.max_abs() - 1.0, 1e-12));
  r.checks.push_back(at_most("kernel_diagonal", K.diagonal_error(), 1e-8));
  const cplx y(0.0, -0.5);
  const cplx a = analytic_continuation(f, K, y);
  r.checks.push_back(holds("continuation_finite", std::isfinite(a.real()) && std::isfinite(a.imag()), std::abs(a)));
  r.checks.push_back(at_most("cauchy_riemann", cauchy_riemann_residual(f, K, y), 1e-5));
  double worst = 0.0;
  for (double yr : {0.0, 1.5}) {
    const double direct = harmonic_norm_direct(f, family, yr);
    worst = std::max(worst, std::abs(analytic_continuation(f, K, yr) - direct));
  }
  r.checks.push_back(at_most("real_agreement", worst, 1e-6));
}

struct Entry {
  int id;
  const char* title;
  double budget;  // seconds, 0 when unbudgeted
  void (*fn)(Shared&, CriterionResult&);
};

const Entry kEntries[] = {
    {1, "Landau anchors", 10.0, landau_anchors},
    {2, "Asymptotic constant", 60.0, asymptotic_constant_check},
    {3, "Derivative consistency", 0.0, derivative_consistency},
    {4, "Plemelj closed forms", 0.0, plemelj_closed_forms},
    {5, "Epsilon sweep", 0.0, epsilon_sweep_check},
    {6, "Parseval", 0.0, parseval},
    {7, "Spectral projector", 0.0, spectral_projector},
    {8, "Threshold LAP certificate", 0.0, threshold_certificate},
    {9, "Decay", 120.0, decay},
    {10, "Agmon envelopes", 0.0, agmon},
    {11, "Overlap kernel", 0.0, overlap},
};

}  // namespace

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* CriterionResult::headline() const {
  for (const auto& c : checks)
    if (!c.timing) return &c;
  return nullptr;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  Shared shared;
  std::vector<CriterionResult> out;
  for (const Entry& e : kEntries) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.title = e.title;
    const auto t0 = clock_type::now();
    shared.used = shared.built_now = false;
    try {
      e.fn(shared, r);
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    r.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    // a reused atlas is charged to every criterion that needs it
    if (shared.used && !shared.built_now) r.seconds += shared.atlas_seconds;
    if (e.budget > 0.0) r.checks.push_back({"runtime_seconds", r.seconds <= e.budget, r.seconds, e.budget, true});
    out.push_back(std::move(r));
  }
  return out;
}

ojson acceptance_json(const std::vector<CriterionResult>& results) {
  ojson arr = ojson::array();
  for (const auto& r : results) {
    ojson c;
    c["id"] = r.id;
    c["title"] = r.title;
    bool pass = r.error.empty() && !r.checks.empty();
    ojson checks = ojson::array();
    for (const auto& ch : r.checks) {
      if (ch.timing) continue;
      pass = pass && ch.pass;
      checks.push_back({{"name", ch.name},
                        {"pass", ch.pass},
                        {"value", ch.value},
                        {"tolerance", ch.tolerance},
                        {"relation", ch.relation}});
    }
    c["pass"] = pass;
    c["checks"] = checks;
    if (!r.error.empty()) c["error"] = r.error;
    arr.push_back(c);
  }
  return arr;
}

std::string acceptance_csv(const std::vector<CriterionResult>& results) {
  std::string out = "criterion,check,pass,value,tolerance\n";
  for (const auto& r : results)
    for (const auto& ch : r.checks) {
      if (ch.timing) continue;
      out += std::to_string(r.id) + "," + ch.name + "," + (ch.pass ? "1" : "0") + "," + format_double(ch.value) + "," +
             format_double(ch.tolerance) + "\n";
    }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d %-26s", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str());
  std::string line = head;
  if (!r.error.empty()) return line + " error: " + r.error;
  for (const auto& c : r.checks) {
    char buf[160];
    if (std::string(c.relation) == "holds")
      std::snprintf(buf, sizeof buf, " %s%s=%.4g", c.pass ? "" : "!", c.name.c_str(), c.value);
    else
      std::snprintf(buf, sizeof buf, " %s%s=%.4g(%s%.3g)", c.pass ? "" : "!", c.name.c_str(), c.value, c.relation,
                    c.tolerance);
    line += buf;
  }
  return line;
}

}  // namespace edgelap::cli
