#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "edgelap/error.hpp"
#include "edgelap/fiber.hpp"
#include "edgelap/format.hpp"
#include "edgelap/modes.hpp"

namespace edgelap::cli {

namespace {

const char* const kSubcommands[] = {"bands", "resolvent", "lap-sweep", "project",
                                    "density", "decay",     "continue",  "selftest"};

struct Raw {
  std::vector<std::string> tol;
  std::string config;
};

void add_common(CLI::App* sub, RunConfig& c, Raw& raw) {
  sub->add_option("--out", c.out, "CSV output path (default <subcommand>.csv)");
  sub->add_option("--summary", c.summary, "summary JSON path (default stdout)");
  sub->add_option("--tol", raw.tol, "tolerance override name=value (repeatable)");
  sub->add_option("--threads", c.threads, "worker threads (default EDGELAP_THREADS or hardware)");
  sub->add_option("--config", raw.config, "JSON config file; flags win");
}

void add_grid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--k-min", c.k_min, "first momentum of a uniform band grid");
  sub->add_option("--k-max", c.k_max, "last momentum of a uniform band grid");
  sub->add_option("--k-step", c.k_step, "step of a uniform band grid");
  sub->add_option("--x-max", c.x_max, "fiber half-line truncation");
  sub->add_option("--points", c.points, "fiber grid points");
}

void add_modes(CLI::App* sub, RunConfig& c, bool pair) {
  sub->add_option("--mode", c.modes, "mode descriptor kind:key=value,... (repeatable)");
  if (pair) sub->add_option("--gmode", c.gmodes, "modes of the second argument (default: --mode)");
  sub->add_option("--mode-step", c.mode_step, "k-step of mode grids");
}

void add_absorption(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "Holder exponent");
  sub->add_option("--s", c.s, "weight exponent");
  sub->add_option("--threshold-window", c.threshold_window, "width of the threshold window above E_n");
  sub->add_flag("--negative-control", c.negative_control, "proceed without membership near thresholds");
}

std::string number_token(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

std::vector<std::string> merge_config(std::vector<std::string> args) {
  const std::string path = config_path(args);
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "config") continue;
    // keys may use the config_echo spelling (k_min) or the flag spelling (k-min)
    std::string flag = "--" + it.key();
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (has_flag(args, flag)) continue;
    auto push = [&](const nlohmann::json& v) {
      if (v.is_boolean()) {
        if (v.get<bool>()) args.push_back(flag);
      } else if (v.is_number()) {
        args.push_back(flag);
        args.push_back(v.is_number_float() ? number_token(v.get<double>()) : v.dump());
      } else if (v.is_string()) {
        args.push_back(flag);
        args.push_back(v.get<std::string>());
      } else {
        throw UsageError("config key '" + it.key() + "' has an unsupported value");
      }
    };
    if (it.value().is_array())
      for (const auto& v : it.value()) push(v);
    else
      push(it.value());
  }
  return args;
}

void check_writable(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw UsageError("output directory does not exist: " + dir.string());
  if (fs::is_directory(p, ec)) throw UsageError("output path is a directory: " + path);
  const bool existed = fs::exists(p, ec);
  {
    std::ofstream probe(path, std::ios::app);
    if (!probe) throw UsageError("output path not writable: " + path);
  }
  if (!existed) fs::remove(p, ec);
}

void validate(RunConfig& c, const Raw& raw) {
  for (const auto& t : raw.tol) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects name=value, got '" + t + "'");
    double v;
    try {
      v = parse_real(t.substr(eq + 1));
    } catch (const Error& e) {
      throw UsageError("--tol " + t + ": " + e.what());
    }
    if (!(v > 0.0)) throw UsageError("tolerance '" + t.substr(0, eq) + "' must be positive");
    c.tolerances[t.substr(0, eq)] = v;
  }
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must lie in [0,1)");
  if (!(c.alpha < c.s - 0.5)) throw UsageError("--alpha must be below s - 1/2");
  if (!(c.threshold_window > 0.0)) throw UsageError("--threshold-window must be positive");
  if (c.n < 1) throw UsageError("--n must be positive");
  if (c.cutoff < 1) throw UsageError("--cutoff must be positive");
  if (!(c.mode_step > 0.0)) throw UsageError("--mode-step must be positive");
  if (c.k_step && !(*c.k_step > 0.0)) throw UsageError("--k-step must be positive");
  if (c.k_min && c.k_max && !(*c.k_min < *c.k_max)) throw UsageError("--k-min must be below --k-max");
  if (c.samples < 5) throw UsageError("--samples must be at least 5");
  if (!(c.eta_max > 0.0)) throw UsageError("--eta-max must be positive");
  if (!(c.radius > 0.0)) throw UsageError("--radius must be positive");
  if (c.x_stride < 1 || !(c.y_max > 0.0) || !(c.y_step > 0.0)) throw UsageError("invalid field specification");
  if (!(c.l_min >= 0.0 && c.l_max > c.l_min && c.l_step > 0.0)) throw UsageError("invalid L window");
  if (!(c.beta_split > 0.0 && c.beta_split < 1.0)) throw UsageError("--beta-split must lie in (0,1)");
  for (double e : c.eps)
    if (!(e > 0.0)) throw UsageError("--eps values must be positive");
  try {
    Discretization d;
    d.x_max = c.x_max;
    d.n_points = c.points;
    d.validate();
    for (const auto* set : {&c.modes, &c.gmodes})
      for (const auto& m : *set) ModeDescriptor::parse(m);
    if (c.z) parse_complex(*c.z);
    parse_complex(c.y);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!c.window.empty()) {
    const auto colon = c.window.find(':');
    if (colon == std::string::npos) throw UsageError("--window expects a:b");
    try {
      if (!(parse_real(c.window.substr(0, colon)) < parse_real(c.window.substr(colon + 1))))
        throw UsageError("--window needs a < b");
    } catch (const Error& e) {
      throw UsageError(std::string("--window: ") + e.what());
    }
  }

  const std::string& sc = c.subcommand;
  const bool needs_mode = sc == "resolvent" || sc == "lap-sweep" || sc == "project" || sc == "density" ||
                          sc == "decay" || sc == "continue";
  if (needs_mode && c.modes.empty()) throw UsageError(sc + " needs at least one --mode");
  if (sc == "resolvent" && c.z.has_value() == c.lambda.has_value())
    throw UsageError("resolvent needs exactly one of --z and --lambda");
  if (sc == "resolvent" && !c.eps.empty() && !c.lambda) throw UsageError("--eps sweeps need --lambda");
  if (sc == "lap-sweep" && c.window.empty()) throw UsageError("lap-sweep needs --window a:b");
  if (sc == "continue" && parse_complex(c.y).imag() > 0.0) throw UsageError("--y must have Im y <= 0");

  check_writable(c.csv_path());
  if (!c.summary.empty()) check_writable(c.summary);
}

}  // namespace

double RunConfig::tol(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

ojson RunConfig::echo() const {
  auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  ojson j;
  j["subcommand"] = subcommand;
  j["n"] = n;
  j["k_min"] = opt(k_min);
  j["k_max"] = opt(k_max);
  j["k_step"] = opt(k_step);
  j["x_max"] = x_max;
  j["points"] = points;
  j["modes"] = modes;
  j["gmodes"] = gmodes;
  j["mode_step"] = mode_step;
  j["z"] = z ? ojson(*z) : ojson(nullptr);
  j["lambda"] = opt(lambda);
  j["side"] = side;
  j["eps"] = eps;
  j["cutoff"] = cutoff;
  j["alpha"] = alpha;
  j["s"] = s;
  j["threshold_window"] = threshold_window;
  j["negative_control"] = negative_control;
  j["window"] = window;
  j["eta_max"] = eta_max;
  j["samples"] = samples;
  j["refine"] = refine;
  j["x_stride"] = x_stride;
  j["y_max"] = y_max;
  j["y_step"] = y_step;
  j["l_min"] = l_min;
  j["l_max"] = l_max;
  j["l_step"] = l_step;
  j["beta_split"] = beta_split;
  j["y"] = y;
  j["radius"] = radius;
  j["out"] = csv_path();
  j["summary"] = summary.empty() ? ojson("stdout") : ojson(summary);
  j["tolerances"] = ojson::object();
  for (const auto& [k, v] : tolerances) j["tolerances"][k] = v;
  return j;
}

RunConfig parse_config(const std::vector<std::string>& tokens) {
  const std::vector<std::string> args = merge_config(tokens);
  RunConfig c;
  Raw raw;
  CLI::App app{"Spectral toolkit for the Dirichlet Landau Hamiltonian on the half-plane", "edgelap"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  auto* bands = app.add_subcommand("bands", "band functions lambda_n(k) on a k-grid");
  bands->add_option("--n", c.n, "band index");
  add_grid(bands, c);

  auto* res = app.add_subcommand("resolvent", "resolvent element <R(z) f, g> or its boundary value");
  add_modes(res, c, true);
  add_grid(res, c);
  add_absorption(res, c);
  res->add_option("--z", c.z, "off-axis point, e.g. 2+0.5i");
  res->add_option("--lambda", c.lambda, "real point for boundary values");
  res->add_option("--side", c.side, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  res->add_option("--eps", c.eps, "epsilon sweep towards --lambda (comma separated)")->delimiter(',');
  res->add_option("--cutoff", c.cutoff, "mode cutoff N");

  auto* lap = app.add_subcommand("lap-sweep", "Holder certificate of R^+- over a window");
  add_modes(lap, c, true);
  add_grid(lap, c);
  add_absorption(lap, c);
  lap->add_option("--window", c.window, "real range a:b of the window");
  lap->add_option("--eta-max", c.eta_max, "height of the window");
  lap->add_option("--samples", c.samples, "samples along the real direction");
  lap->add_flag("--refine", c.refine, "also run at 2x sampling and compare");

  auto* proj = app.add_subcommand("project", "synthesize a field from modes and project it back");
  add_modes(proj, c, false);
  add_grid(proj, c);
  proj->add_option("--x-stride", c.x_stride, "x subsampling of the fiber grid");
  proj->add_option("--y-max", c.y_max, "half-width of the y range");
  proj->add_option("--y-step", c.y_step, "y spacing");

  auto* dens = app.add_subcommand("density", "energy density H_n, membership and Plemelj values");
  add_modes(dens, c, true);
  add_grid(dens, c);
  add_absorption(dens, c);
  dens->add_option("--lambda", c.lambda, "energy for the boundary value and jump check");

  auto* dec = app.add_subcommand("decay", "geometric localization profile and Agmon envelopes");
  add_modes(dec, c, false);
  add_grid(dec, c);
  dec->add_option("--alpha", c.alpha, "Holder exponent");
  dec->add_option("--l-min", c.l_min, "first L of the fit window");
  dec->add_option("--l-max", c.l_max, "last L of the fit window");
  dec->add_option("--l-step", c.l_step, "L spacing");
  dec->add_option("--beta-split", c.beta_split, "beta used for the k(L) split predictions");

  auto* cont = app.add_subcommand("continue", "analytic continuation of the harmonic norm in y");
  add_modes(cont, c, false);
  add_grid(cont, c);
  cont->add_option("--y", c.y, "complex y with Im y <= 0");
  cont->add_option("--radius", c.radius, "Cauchy-Riemann stencil radius");

  auto* self = app.add_subcommand("selftest", "run the acceptance suite");

  for (auto* sub : {bands, res, lap, proj, dens, dec, cont, self}) add_common(sub, c, raw);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    throw HelpRequested(subs.empty() ? app.help() : subs.front()->help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const char* name : kSubcommands)
    if (app.got_subcommand(name)) c.subcommand = name;
  validate(c, raw);
  return c;
}

}  // namespace edgelap::cli
