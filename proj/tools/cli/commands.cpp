#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "cli/acceptance.hpp"
#include "edgelap/band.hpp"
#include "edgelap/decay.hpp"
#include "edgelap/error.hpp"
#include "edgelap/format.hpp"
#include "edgelap/lap.hpp"
#include "edgelap/modes.hpp"
#include "edgelap/parallel.hpp"

namespace edgelap::cli {

namespace {

struct Outcome {
  ojson results = ojson::object();
  std::vector<Check> checks;
  std::string csv;
};

ojson complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Check at_most(std::string name, double value, double tol) { return {std::move(name), value <= tol, value, tol}; }
Check at_least(std::string name, double value, double tol) {
  return {std::move(name), value >= tol, value, tol, false, ">="};
}

class Context {
 public:
  explicit Context(const RunConfig& c) : c_(c) {
    disc_.x_max = c.x_max;
    disc_.n_points = c.points;
  }

  const RunConfig& config() const { return c_; }
  const Discretization& disc() const { return disc_; }

  std::vector<double> k_grid() const {
    if (!c_.k_min && !c_.k_max && !c_.k_step) return default_k_grid();
    return uniform_grid(c_.k_min.value_or(-4.0), c_.k_max.value_or(4.5), c_.k_step.value_or(0.05));
  }

  const std::vector<BandTablePtr>& atlas(int n_max) {
    if (static_cast<int>(atlas_.size()) < n_max) atlas_ = build_band_atlas(n_max, k_grid(), disc_);
    return atlas_;
  }

  std::vector<ModeFunction> modes(const std::vector<std::string>& texts) {
    int n_max = 1;
    std::vector<ModeDescriptor> ds;
    for (const auto& t : texts) {
      ds.push_back(ModeDescriptor::parse(t));
      n_max = std::max(n_max, ds.back().n);
    }
    const auto& bands = atlas(n_max);
    std::vector<ModeFunction> out;
    for (const auto& d : ds) {
      const BandTablePtr& b = bands[static_cast<std::size_t>(d.n - 1)];
      out.push_back(ModeFunction::from_descriptor(d, mode_k_grid(d, b.get(), c_.mode_step), b));
    }
    return out;
  }

  std::vector<ModeFunction> gmodes() { return modes(c_.gmodes.empty() ? c_.modes : c_.gmodes); }

  LapOptions lap_options() const {
    LapOptions o;
    o.alpha = c_.alpha;
    o.s = c_.s;
    o.threshold_window = c_.threshold_window;
    o.negative_control = c_.negative_control;
    return o;
  }

 private:
  const RunConfig& c_;
  Discretization disc_;
  std::vector<BandTablePtr> atlas_;
};

int max_band(const std::vector<ModeFunction>& a, const std::vector<ModeFunction>& b) {
  int n = 1;
  for (const auto& m : a) n = std::max(n, m.n());
  for (const auto& m : b) n = std::max(n, m.n());
  return n;
}

Outcome cmd_bands(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const BandTable t = BandTable::build(c.n, ctx.k_grid(), ctx.disc());
  std::vector<std::vector<double>> rows;
  double min_gap = INFINITY;
  bool monotone = true;
  for (std::size_t i = 0; i < t.k_grid().size(); ++i) {
    const double lp = t.lambda_prime()[i];
    rows.push_back({t.k_grid()[i], t.lambda()[i], lp, 1.0 / std::sqrt(std::abs(lp))});
    min_gap = std::min(min_gap, t.lambda()[i] - t.threshold());
    if (i && !(t.lambda()[i] < t.lambda()[i - 1])) monotone = false;
  }
  o.csv = csv_table({"k", "lambda", "lambda_prime", "mu"}, rows);
  o.results["n"] = t.n();
  o.results["threshold"] = t.threshold();
  o.results["nodes"] = t.k_grid().size();
  o.results["lambda_max"] = t.lambda_max();
  o.results["k_floor"] = t.k_floor();
  o.results["calibration_offset"] = t.calibration_offset();
  o.checks.push_back({"above_threshold", min_gap > 0.0, min_gap, 0.0, false, ">"});
  o.checks.push_back({"decreasing", monotone, monotone ? 1.0 : 0.0, 0.0, false, "holds"});
  if (t.k_first() <= 0.0 && t.k_last() >= 0.0) {
    const double l0 = t.evaluate(0.0), exact = 4.0 * c.n - 1.0;
    o.results["lambda_at_zero"] = l0;
    o.checks.push_back(at_most("anchor", std::abs(l0 - exact) / exact, c.tol("anchor", 1e-6)));
  }
  if (t.k_first() <= 2.5 && t.k_last() >= 3.5) {
    const AsymptoticFit fit = asymptotic_check(t, 2.5, 3.5);
    o.results["asymptotic"] = {{"C_n", fit.C_n},
                               {"gap_prefactor", fit.gap_prefactor},
                               {"gap_prefactor_rel_error", fit.gap_prefactor_rel_error},
                               {"gap_prefactor_mean", fit.gap_prefactor_mean},
                               {"derivative_prefactor", fit.derivative_prefactor},
                               {"derivative_prefactor_rel_error", fit.derivative_prefactor_rel_error}};
    o.checks.push_back(
        at_most("asymptotic_prefactor", fit.gap_prefactor_rel_error, c.tol("asymptotic_prefactor", c.n == 1 ? 0.05 : 0.10)));
  }
  return o;
}

Outcome cmd_resolvent(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  ResolventQuery q;
  q.f = ctx.modes(c.modes);
  q.g = ctx.gmodes();
  q.mode_cutoff = c.cutoff;
  const auto& bands = ctx.atlas(std::min(max_band(q.f, q.g), c.cutoff));
  const Side side = c.side == "minus" ? Side::minus : Side::plus;
  q.point = c.z ? SpectralPoint::off_axis(parse_complex(*c.z)) : SpectralPoint::boundary(*c.lambda, side);
  const LapOptions opt = ctx.lap_options();
  const LapResult r = resolvent_element(q, bands, opt);

  o.results["point"] = c.z ? ojson{{"z", complex_json(q.point.z)}}
                           : ojson{{"lambda", *c.lambda}, {"side", to_string(side)}};
  o.results["value"] = complex_json(r.value);
  ojson per = ojson::array();
  cplx sum = 0.0;
  std::vector<std::vector<double>> rows;
  for (const auto& [n, v] : r.per_mode) {
    per.push_back({{"n", n}, {"re", v.real()}, {"im", v.imag()}, {"method", to_string(r.method_tags.at(n))}});
    rows.push_back({static_cast<double>(n), v.real(), v.imag()});
    sum += v;
  }
  o.results["per_mode"] = per;
  o.results["tail_bound"] = r.tail_bound;
  o.csv = csv_table({"n", "re", "im"}, rows);
  o.checks.push_back(at_most("additivity", std::abs(r.value - sum), 1e-12));
  const bool diagonal = c.gmodes.empty() || c.gmodes == c.modes;
  const bool upper = c.z ? q.point.z.imag() > 0.0 : side == Side::plus;
  if (diagonal && upper) o.checks.push_back(at_least("herglotz", r.value.imag(), -c.tol("herglotz", 1e-12)));

  if (!c.eps.empty()) {
    rows.clear();
    ojson sweep = ojson::array();
    double prev = INFINITY, last = 0.0;
    double violations = 0.0;
    for (double e : c.eps) {
      ResolventQuery qe = q;
      qe.point = SpectralPoint::off_axis(cplx(*c.lambda, side_sign(side) * e));
      const cplx v = resolvent_element(qe, bands, opt).value;
      const double d = std::abs(v - r.value);
      if (d > prev) violations += 1.0;
      prev = last = d;
      rows.push_back({e, v.real(), v.imag(), d});
      sweep.push_back({{"eps", e}, {"re", v.real()}, {"im", v.imag()}, {"difference", d}});
    }
    o.results["eps_sweep"] = sweep;
    o.csv = csv_table({"eps", "re", "im", "difference"}, rows);
    o.checks.push_back(at_most("eps_monotone_violations", violations, 0.0));
    o.checks.push_back(at_most("eps_final_gap", last, c.tol("eps_final_gap", 1e-6)));
  }
  return o;
}

Window parse_window(const RunConfig& c) {
  const auto colon = c.window.find(':');
  return {parse_real(c.window.substr(0, colon)), parse_real(c.window.substr(colon + 1)), 0.0, c.eta_max};
}

Outcome cmd_lap_sweep(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const auto f = ctx.modes(c.modes);
  const auto g = ctx.gmodes();
  const auto& bands = ctx.atlas(max_band(f, g));
  const Window K = parse_window(c);
  const LapOptions opt = ctx.lap_options();
  const HolderCertificate cert = holder_certificate(f, g, K, bands, c.samples, opt);
  o.results["window"] = {{"re_lo", K.re_lo}, {"re_hi", K.re_hi}, {"im_lo", K.im_lo}, {"im_hi", K.im_hi}};
  o.results["alpha"] = cert.alpha;
  o.results["negative_control"] = c.negative_control;
  o.results["samples"] = c.samples;
  o.results["points"] = cert.samples.size() / 2;
  o.results["pairs"] = cert.pairs;
  o.results["constant"] = cert.constant;
  o.results["constant_plus"] = cert.constant_plus;
  o.results["constant_minus"] = cert.constant_minus;
  o.checks.push_back({"finite", std::isfinite(cert.constant), cert.constant, 0.0, false, "holds"});
  o.csv = cert.csv();
  if (c.refine) {
    const HolderCertificate fine = holder_certificate(f, g, K, bands, 2 * c.samples - 1, opt);
    const double change = std::abs(fine.constant / cert.constant - 1.0);
    o.results["refined_samples"] = 2 * c.samples - 1;
    o.results["refined_constant"] = fine.constant;
    o.results["refinement_change"] = change;
    o.checks.push_back(at_most("refinement_change", change, c.tol("refinement_change", 0.2)));
    o.csv = fine.csv();
  }
  return o;
}

Outcome cmd_project(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const auto modes = ctx.modes(c.modes);
  const Discretization disc = common_discretization(modes, ctx.disc());
  std::vector<FiberFamily> families;
  double expected = 0.0;
  for (const auto& m : modes) {
    families.push_back(FiberFamily::solve(m.n(), m.k_grid(), disc));
    expected += m.norm_squared();
  }
  FieldSpec spec;
  spec.x_stride = c.x_stride;
  spec.y_max = c.y_max;
  spec.y_step = c.y_step;
  const HalfPlaneFunction field = synthesize_field(modes, families, spec);
  const double norm = weighted_norm(field, 0.0);
  const double rel = std::abs(norm * norm / expected - 1.0);
  o.results["mode_norm_squared"] = expected;
  o.results["grid_norm_squared"] = norm * norm;
  o.results["weighted_norm_s"] = weighted_norm(field, c.s);
  o.checks.push_back(at_most("parseval", rel, c.tol("parseval", 1e-4)));

  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const ModeFunction p = project_mode(field, families[m]);
    for (std::size_t j = 0; j < p.k_grid().size(); ++j) {
      const double k = p.k_grid()[j];
      cplx want = 0.0;
      for (const auto& other : modes)
        if (other.n() == modes[m].n()) want += other(k);
      worst = std::max(worst, std::abs(p.samples()[j] - want));
      rows.push_back({static_cast<double>(p.n()), k, p.samples()[j].real(), p.samples()[j].imag(), want.real(),
                      want.imag()});
    }
  }
  o.results["projection_max_error"] = worst;
  o.checks.push_back(at_most("projection", worst, c.tol("projection", 1e-6)));
  o.csv = csv_table({"n", "k", "re", "im", "expected_re", "expected_im"}, rows);
  return o;
}

ojson membership_json(const MembershipReport& r) {
  return {{"n", r.n},
          {"alpha", r.alpha},
          {"s", r.s},
          {"vanishing_value", r.vanishing_value},
          {"vanishing_tolerance", r.vanishing_tolerance},
          {"tail_exponent", r.tail_exponent},
          {"tail_constant", r.tail_constant},
          {"holder_constant_estimate", r.holder_constant_estimate},
          {"w_alpha_sup", r.w_alpha_sup},
          {"regression_nodes", r.regression_nodes},
          {"verdict", to_string(r.verdict)},
          {"reason", r.reason}};
}

Outcome cmd_density(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const auto fs = ctx.modes({c.modes.front()});
  const auto gs = ctx.modes({c.gmodes.empty() ? c.modes.front() : c.gmodes.front()});
  const ModeFunction& f = fs.front();
  const ModeFunction& g = gs.front();
  require(f.n() == g.n(), "density needs two modes of the same band");
  const BandTable& band = *ctx.atlas(f.n())[static_cast<std::size_t>(f.n() - 1)];
  o.results["membership_f"] = membership_json(membership_report(f, band, c.alpha, c.s));
  if (!c.gmodes.empty()) o.results["membership_g"] = membership_json(membership_report(g, band, c.alpha, c.s));

  const double E = band.threshold();
  const double lo_k = std::max({f.support().lo, g.support().lo, band.k_first()});
  const double hi_k = std::min({f.support().hi, g.support().hi, band.k_floor()});
  std::vector<std::vector<double>> rows;
  if (hi_k > lo_k) {
    const double g_hi = band.gap(lo_k), g_lo = std::max(band.gap(hi_k), BandTable::gap_floor);
    constexpr int kRows = 201;
    for (int i = 0; i < kRows; ++i) {
      const double gap = g_lo * std::pow(g_hi / g_lo, static_cast<double>(i) / (kRows - 1));
      const double lam = E + gap;
      const cplx h = energy_density(f, g, band, lam);
      const cplx mf = transported_mode(f, band, lam);
      rows.push_back({lam, gap, h.real(), h.imag(), mf.real(), mf.imag()});
    }
  }
  o.csv = csv_table({"lambda", "gap", "H_re", "H_im", "mu_f_re", "mu_f_im"}, rows);

  if (c.lambda) {
    const LapOptions opt = ctx.lap_options();
    const BoundaryValue p = rn_boundary(f, g, band, *c.lambda, Side::plus, opt);
    const BoundaryValue m = rn_boundary(f, g, band, *c.lambda, Side::minus, opt);
    const cplx h = energy_density(f, g, band, *c.lambda);
    const double jump = std::abs(p.value - m.value - cplx(0.0, 2.0 * std::numbers::pi) * h);
    o.results["lambda"] = *c.lambda;
    o.results["H"] = complex_json(h);
    o.results["plus"] = complex_json(p.value);
    o.results["minus"] = complex_json(m.value);
    o.results["principal_value"] = complex_json(p.pv_part);
    o.checks.push_back(at_most("jump_identity", jump, c.tol("jump_identity", 1e-8)));
  }
  return o;
}

Outcome cmd_decay(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const auto modes = ctx.modes({c.modes.front()});
  const ModeFunction& f = modes.front();
  const BandTable& band = *ctx.atlas(f.n())[static_cast<std::size_t>(f.n() - 1)];
  const FiberFamily family = FiberFamily::solve(f.n(), f.k_grid(), common_discretization(modes, ctx.disc()));
  DecayOptions opt;
  opt.alpha = c.alpha;
  opt.L_lo = c.l_min;
  opt.L_hi = c.l_max;
  opt.L_step = c.l_step;
  opt.beta_split = c.beta_split;
  const DecayProfile p = decay_certificate(f, family, band, opt);
  o.csv = p.csv();
  o.results["fitted_beta"] = p.fitted_beta;
  o.results["theorem_bound"] = p.theorem_bound;
  o.results["pass"] = p.pass;
  o.results["fit_window"] = {p.fit_lo, p.fit_hi};
  o.results["abscissa_shift"] = p.abscissa_shift;
  o.results["decades"] = p.decades;
  o.results["gamma_paper"] = p.gamma_paper;
  auto split = [](const SplitExponents& e) { return ojson{{"gamma", e.gamma}, {"high_k", e.high_k}, {"low_k", e.low_k}}; };
  o.results["split_paper"] = split(p.split_paper);
  o.results["split_balanced"] = split(p.split_balanced);
  o.checks.push_back(at_least("fitted_beta_floor", p.fitted_beta, c.tol("fitted_beta_floor", 0.7)));
  o.checks.push_back(at_least("theorem_bound", p.fitted_beta, p.theorem_bound));
  o.checks.push_back({"split_consistent", p.split_consistent,
                      std::abs(p.split_balanced.high_k - p.split_balanced.low_k), opt.split_tolerance, false, "holds"});

  ojson env = ojson::array();
  double margin = INFINITY, sup_ratio = 0.0;
  for (double k : {-3.0, -1.0, 0.0}) {
    const auto pairs = solve_fiber(k, f.n(), ctx.disc());
    for (double beta : {0.5, 0.75}) {
      const EnvelopeCheck e = agmon_envelope(pairs[static_cast<std::size_t>(f.n() - 1)], beta);
      env.push_back({{"k", k},
                     {"beta", beta},
                     {"margin", e.margin},
                     {"pass", e.pass},
                     {"sup_norm", e.sup_norm},
                     {"sup_bound", e.sup_bound},
                     {"empirical_constant", e.empirical_constant}});
      margin = std::min(margin, e.pass ? std::max(e.margin, 0.0) : e.margin);
      sup_ratio = std::max(sup_ratio, e.sup_norm / e.sup_bound);
    }
  }
  o.results["envelopes"] = env;
  o.checks.push_back(at_least("agmon_margin", margin, -1e-10));
  o.checks.push_back(at_most("sup_bound_ratio", sup_ratio, 1.0));
  return o;
}

Outcome cmd_continue(Context& ctx) {
  const RunConfig& c = ctx.config();
  Outcome o;
  const auto modes = ctx.modes({c.modes.front()});
  const ModeFunction& f = modes.front();
  const FiberFamily family = FiberFamily::solve(f.n(), f.k_grid(), common_discretization(modes, ctx.disc()));
  const OverlapKernel K = OverlapKernel::build(family);
  const cplx y = parse_complex(c.y);
  const cplx a = analytic_continuation(f, K, y);
  const double cr = cauchy_riemann_residual(f, K, y, c.radius);
  const double direct = harmonic_norm_direct(f, family, y.real());
  const cplx on_axis = analytic_continuation(f, K, y.real());
  o.results["y"] = complex_json(y);
  o.results["value"] = complex_json(a);
  o.results["cauchy_riemann_residual"] = cr;
  o.results["kernel_max_abs"] = K.max_abs();
  o.results["kernel_diagonal_error"] = K.diagonal_error();
  o.results["direct_real_y"] = direct;
  o.results["continuation_real_y"] = complex_json(on_axis);
  o.checks.push_back({"finite", std::isfinite(a.real()) && std::isfinite(a.imag()), std::abs(a), 0.0, false, "holds"});
  o.checks.push_back(at_most("kernel_bound", K.max_abs() - 1.0, 1e-12));
  o.checks.push_back(at_most("kernel_diagonal", K.diagonal_error(), c.tol("kernel_diagonal", 1e-8)));
  o.checks.push_back(at_most("cauchy_riemann", cr, c.tol("cauchy_riemann", 1e-5)));
  o.checks.push_back(at_most("real_agreement", std::abs(on_axis - direct), c.tol("real_agreement", 1e-6)));

  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= 60; ++i) {
    const double re = y.real() - 3.0 + 0.1 * i;
    const cplx v = analytic_continuation(f, K, cplx(re, y.imag()));
    rows.push_back({re, y.imag(), v.real(), v.imag()});
  }
  o.csv = csv_table({"y_re", "y_im", "re", "im"}, rows);
  return o;
}

Outcome cmd_selftest(Context&) {
  Outcome o;
  const auto results = run_acceptance();
  for (const auto& r : results) {
    std::cerr << format_line(r) << "\n";
    for (const auto& ch : r.checks)
      if (!ch.timing) {
        Check flat = ch;
        flat.name = "c" + std::to_string(r.id) + "." + ch.name;
        o.checks.push_back(flat);
      }
    if (!r.error.empty())
      o.checks.push_back({"c" + std::to_string(r.id) + ".error", false, 0.0, 0.0, false, "holds"});
  }
  o.results["criteria"] = acceptance_json(results);
  o.csv = acceptance_csv(results);
  return o;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  return static_cast<bool>(out);
}

ojson checks_json(const std::vector<Check>& checks) {
  ojson a = ojson::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
  return a;
}

}  // namespace

std::string usage_error_summary(const std::vector<std::string>& args, const std::string& message) {
  ojson s;
  s["subcommand"] = args.empty() ? "" : args.front();
  s["config_echo"] = nullptr;
  s["results"] = ojson::object();
  s["checks"] = ojson::array();
  s["error"] = {{"kind", "usage"}, {"message", message}};
  s["exit_code"] = 2;
  return dump_fixed(s);
}

int run(const RunConfig& config) {
  if (config.threads > 0) set_parallelism(config.threads);
  Context ctx(config);
  Outcome o;
  ojson error = nullptr;
  int code = 0;
  try {
    const std::string& sc = config.subcommand;
    if (sc == "bands") o = cmd_bands(ctx);
    else if (sc == "resolvent") o = cmd_resolvent(ctx);
    else if (sc == "lap-sweep") o = cmd_lap_sweep(ctx);
    else if (sc == "project") o = cmd_project(ctx);
    else if (sc == "density") o = cmd_density(ctx);
    else if (sc == "decay") o = cmd_decay(ctx);
    else if (sc == "continue") o = cmd_continue(ctx);
    else if (sc == "selftest") o = cmd_selftest(ctx);
    else throw UsageError("unknown subcommand '" + sc + "'");
    for (const auto& c : o.checks)
      if (!c.pass) code = 1;
  } catch (const Error& e) {
    code = e.kind() == ErrorKind::invalid_input ? 2 : 1;
    error = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  } catch (const UsageError& e) {
    code = 2;
    error = {{"kind", "usage"}, {"message", e.what()}};
  }

  if (!o.csv.empty() && !write_file(config.csv_path(), o.csv)) {
    std::cerr << "edgelap: cannot write " << config.csv_path() << "\n";
    code = 2;
  }
  ojson s;
  s["subcommand"] = config.subcommand;
  s["config_echo"] = config.echo();
  s["results"] = o.results;
  s["checks"] = checks_json(o.checks);
  if (!error.is_null()) s["error"] = error;
  s["exit_code"] = code;
  const std::string text = dump_fixed(s);
  if (config.summary.empty()) {
    std::cout << text;
  } else if (!write_file(config.summary, text)) {
    std::cerr << "edgelap: cannot write " << config.summary << "\n";
    return 2;
  }
  if (!error.is_null()) std::cerr << "edgelap: " << error["message"].get<std::string>() << "\n";
  return code;
}

}  // namespace edgelap::cli
