#include "edgelap/modes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "edgelap/cauchy.hpp"
#include "edgelap/error.hpp"
#include "edgelap/format.hpp"
#include "edgelap/interp.hpp"
#include "edgelap/parallel.hpp"
#include "json.hpp"

namespace edgelap {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  const std::size_t m = t.size();
  std::vector<double> w(m, 0.0);
  if (m < 2) return w;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double max_step(const std::vector<double>& t) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s = std::max(s, t[i + 1] - t[i]);
  return s;
}

double max_abs(const std::vector<double>& t) {
  double s = 0.0;
  for (double v : t) s = std::max(s, std::abs(v));
  return s;
}

void check_family(const ModeFunction& mode, const FiberFamily& family) {
  require(mode.n() == family.n(), "mode and family belong to different bands");
  require(mode.k_grid() == family.k_grid(), "mode and family must share the k-grid");
}

ModeKind kind_from_name(const std::string& s) {
  if (s == "gauss" || s == "gaussian") return ModeKind::gaussian;
  if (s == "bump") return ModeKind::bump;
  if (s == "flat" || s == "threshold-flat") return ModeKind::threshold_flat;
  if (s == "holder" || s == "threshold-holder") return ModeKind::threshold_holder;
  if (s == "custom") return ModeKind::custom;
  fail(ErrorKind::invalid_input, "unknown mode kind '" + s + "'");
}

void validate(const ModeDescriptor& d) {
  require(d.n >= 1, "mode band index must be positive");
  require(std::isfinite(d.k0), "k0 must be finite");
  if (d.kind == ModeKind::gaussian || d.kind == ModeKind::bump) require(d.width > 0.0, "mode width must be positive");
  if (d.kind == ModeKind::threshold_holder) require(d.exponent > 0.0, "holder exponent must be positive");
  require(d.kind != ModeKind::custom, "custom modes are built from samples");
}

}  // namespace

const char* to_string(ModeKind kind) noexcept {
  switch (kind) {
    case ModeKind::gaussian: return "gauss";
    case ModeKind::bump: return "bump";
    case ModeKind::threshold_flat: return "flat";
    case ModeKind::threshold_holder: return "holder";
    case ModeKind::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::in: return "in";
    case Verdict::out: return "out";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

ModeDescriptor ModeDescriptor::parse(const std::string& text) {
  ModeDescriptor d;
  const auto colon = text.find(':');
  d.kind = kind_from_name(text.substr(0, colon));
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!item.empty()) {
        const auto eq = item.find('=');
        require(eq != std::string::npos, "mode parameter without value: '" + item + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (key == "n") {
          const double v = parse_real(val);
          require(v == std::floor(v) && v >= 1 && v <= 1000, "mode n must be a positive integer");
          d.n = static_cast<int>(v);
        } else if (key == "k0") d.k0 = parse_real(val);
        else if (key == "w") d.width = parse_real(val);
        else if (key == "a") d.amplitude = parse_complex(val);
        else if (key == "p") d.exponent = parse_real(val);
        else fail(ErrorKind::invalid_input, "unknown mode parameter '" + key + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  validate(d);
  return d;
}

std::string ModeDescriptor::to_string() const {
  std::string s = std::string(edgelap::to_string(kind)) + ":n=" + std::to_string(n);
  if (kind == ModeKind::gaussian || kind == ModeKind::bump)
    s += ",k0=" + format_double(k0) + ",w=" + format_double(width);
  if (kind == ModeKind::threshold_holder) s += ",p=" + format_double(exponent);
  s += ",a=" + format_complex(amplitude);
  return s;
}

ModeDescriptor ModeDescriptor::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorKind::invalid_input, std::string("mode descriptor JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("kind"), "mode descriptor JSON needs a kind");
  ModeDescriptor d;
  try {
    d.kind = kind_from_name(j.at("kind").get<std::string>());
    d.n = j.value("n", 1);
    d.k0 = j.value("k0", 0.0);
    d.width = j.value("w", 0.5);
    d.amplitude = cplx(j.value("a_re", 1.0), j.value("a_im", 0.0));
    d.exponent = j.value("p", 0.5);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("mode descriptor JSON: ") + e.what());
  }
  validate(d);
  return d;
}

std::string ModeDescriptor::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = edgelap::to_string(kind);
  j["n"] = n;
  j["k0"] = k0;
  j["w"] = width;
  j["a_re"] = amplitude.real();
  j["a_im"] = amplitude.imag();
  j["p"] = exponent;
  return j.dump();
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

ModeFunction::ModeFunction(int n, std::vector<double> k_grid, std::function<cplx(double)> eval, Support support,
                           std::optional<ModeDescriptor> descriptor)
    : n_(n), k_(std::move(k_grid)), eval_(std::move(eval)), support_(support), descriptor_(std::move(descriptor)) {
  require(n_ >= 1, "mode band index must be positive");
  require(k_.size() >= 2, "mode grid needs at least two nodes");
  for (std::size_t i = 0; i + 1 < k_.size(); ++i) require(k_[i + 1] > k_[i], "mode grid must increase");
  samples_.resize(k_.size());
  for (std::size_t i = 0; i < k_.size(); ++i) {
    samples_[i] = eval_(k_[i]);
    require(std::isfinite(samples_[i].real()) && std::isfinite(samples_[i].imag()), "mode samples must be finite");
  }
}

Support descriptor_support(const ModeDescriptor& d, const BandTable* band) {
  switch (d.kind) {
    case ModeKind::gaussian: return {d.k0 - 6.0 * d.width, d.k0 + 6.0 * d.width};
    case ModeKind::bump: return {d.k0 - d.width, d.k0 + d.width};
    case ModeKind::threshold_flat:
    case ModeKind::threshold_holder:
      require(band != nullptr, "threshold modes need a band table");
      return {0.0, band->k_floor()};
    case ModeKind::custom: break;
  }
  return {};
}

std::vector<double> mode_k_grid(const ModeDescriptor& d, const BandTable* band, double step) {
  require(step > 0.0, "k step must be positive");
  const Support s = descriptor_support(d, band);
  require(s.bounded(), "descriptor support must be bounded");
  const auto m = static_cast<std::size_t>(std::max(2.0, std::ceil((s.hi - s.lo) / step - 1e-9)));
  std::vector<double> g(m + 1);
  for (std::size_t i = 0; i <= m; ++i) g[i] = s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(m);
  return g;
}

ModeFunction ModeFunction::from_descriptor(const ModeDescriptor& d, const std::vector<double>& k_grid,
                                           BandTablePtr band) {
  validate(d);
  const cplx a = d.amplitude;
  const double k0 = d.k0, w = d.width, p = d.exponent;
  std::function<cplx(double)> f;
  switch (d.kind) {
    case ModeKind::gaussian:
      f = [=](double k) -> cplx {
        const double t = (k - k0) / w;
        return std::abs(t) <= 6.0 ? a * std::exp(-t * t) : cplx(0.0);
      };
      break;
    case ModeKind::bump:
      f = [=](double k) -> cplx {
        const double t = (k - k0) / w;
        return std::abs(t) < 1.0 ? a * std::exp(1.0 - 1.0 / (1.0 - t * t)) : cplx(0.0);
      };
      break;
    case ModeKind::threshold_flat:
    case ModeKind::threshold_holder: {
      require(band != nullptr && band->n() == d.n, "threshold modes need the matching band table");
      const bool holder = d.kind == ModeKind::threshold_holder;
      f = [=](double k) -> cplx {
        if (k <= 0.0 || k > band->k_floor()) return 0.0;
        double v = smooth_step(k) * std::sqrt(std::abs(band->derivative(k)));
        if (holder) v *= std::pow(band->gap(k), p);
        return a * v;
      };
      break;
    }
    case ModeKind::custom: break;
  }
  return ModeFunction(d.n, k_grid, std::move(f), descriptor_support(d, band.get()), d);
}

ModeFunction ModeFunction::from_samples(int n, std::vector<double> k_grid, std::vector<cplx> samples) {
  require(k_grid.size() == samples.size() && k_grid.size() >= 3, "custom mode needs matching samples");
  std::vector<double> re(samples.size()), im(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    re[i] = samples[i].real();
    im[i] = samples[i].imag();
  }
  auto pr = std::make_shared<HermiteCubic>(HermiteCubic::smooth(k_grid, re));
  auto pi = std::make_shared<HermiteCubic>(HermiteCubic::smooth(k_grid, im));
  const double lo = k_grid.front(), hi = k_grid.back();
  auto f = [pr, pi, lo, hi](double k) -> cplx {
    if (k < lo || k > hi) return 0.0;
    return {(*pr)(k), (*pi)(k)};
  };
  ModeFunction m(n, std::move(k_grid), std::move(f), Support{lo, hi});
  m.samples_ = std::move(samples);
  return m;
}

ModeFunction ModeFunction::zero(int n, std::vector<double> k_grid) {
  const double lo = k_grid.front(), hi = k_grid.back();
  return ModeFunction(n, std::move(k_grid), [](double) { return cplx(0.0); }, Support{lo, hi});
}

cplx ModeFunction::operator()(double k) const { return eval_(k); }

double ModeFunction::norm_squared() const {
  const auto w = trapezoid_weights(k_);
  double s = 0.0;
  for (std::size_t i = 0; i < k_.size(); ++i) s += w[i] * std::norm(samples_[i]);
  return s;
}

double ModeFunction::sup_abs() const {
  double s = 0.0;
  for (const auto& v : samples_) s = std::max(s, std::abs(v));
  return s;
}

ModeFunction ModeFunction::scaled(cplx s) const {
  ModeFunction m = *this;
  auto inner = eval_;
  m.eval_ = [inner, s](double k) { return s * inner(k); };
  for (auto& v : m.samples_) v *= s;
  if (m.descriptor_) m.descriptor_->amplitude *= s;
  return m;
}

std::string ModeFunction::csv() const {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < k_.size(); ++i) rows.push_back({k_[i], samples_[i].real(), samples_[i].imag()});
  return csv_table({"k", "re", "im"}, rows);
}

FiberFamily FiberFamily::solve(int n, std::vector<double> k_grid, const Discretization& disc) {
  require(!k_grid.empty(), "empty k-grid");
  FiberFamily f;
  f.n_ = n;
  f.k_ = std::move(k_grid);
  f.u_.resize(f.k_.size());
  f.lambda_.resize(f.k_.size());
  std::vector<FiberGrid> grids(f.k_.size());
  parallel_for(f.k_.size(), [&](std::size_t j) {
    auto pairs = solve_fiber_fixed(f.k_[j], n, disc);
    auto& p = pairs[static_cast<std::size_t>(n - 1)];
    f.u_[j] = std::move(p.u);
    f.lambda_[j] = p.lambda;
    grids[j] = p.grid;
  });
  f.grid_ = grids.front();
  return f;
}

double FiberFamily::u_at(std::size_t j, double x) const {
  const auto& u = u_[j];
  const double h = grid_.h;
  if (x <= 0.0 || x >= grid_.x_max) return 0.0;
  const double s = x / h;
  auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  const auto last = static_cast<std::ptrdiff_t>(grid_.n_points) - 1;
  if (static_cast<double>(i) == s) return u[static_cast<std::size_t>(i)];
  const std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(i - 1, 0, last - 3);
  double v = 0.0;
  for (std::ptrdiff_t a = 0; a < 4; ++a) {
    double l = 1.0;
    for (std::ptrdiff_t b = 0; b < 4; ++b)
      if (a != b) l *= (s - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    v += l * u[static_cast<std::size_t>(i0 + a)];
  }
  return v;
}

Discretization common_discretization(const std::vector<ModeFunction>& modes, const Discretization& base) {
  std::vector<double> ks;
  int n_max = 1;
  for (const auto& m : modes) {
    ks.push_back(m.k_grid().back());
    n_max = std::max(n_max, m.n());
  }
  return discretization_for(ks, n_max, base);
}

HalfPlaneFunction HalfPlaneFunction::from_function(std::vector<double> x, std::vector<double> y,
                                                   const std::function<cplx(double, double)>& f) {
  HalfPlaneFunction h;
  h.x = std::move(x);
  h.y = std::move(y);
  h.values.resize(h.x.size() * h.y.size());
  for (std::size_t i = 0; i < h.x.size(); ++i)
    for (std::size_t j = 0; j < h.y.size(); ++j) h.values[i * h.y.size() + j] = f(h.x[i], h.y[j]);
  return h;
}

cplx synthesize_harmonic(const ModeFunction& mode, const FiberFamily& family, double x, double y) {
  check_family(mode, family);
  require(x >= 0.0 && x <= family.grid().x_max, "x outside the fiber grid");
  const auto& k = mode.k_grid();
  if (std::abs(y) * max_step(k) > 0.5)
    fail(ErrorKind::unresolved_oscillation, "|y| times the k-step exceeds 0.5");
  const auto w = trapezoid_weights(k);
  cplx s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    const cplx fj = mode.samples()[j];
    if (fj == cplx(0.0)) continue;
    s += w[j] * std::polar(1.0, k[j] * y) * fj * family.u_at(j, x);
  }
  return kInvSqrt2Pi * s;
}

HalfPlaneFunction synthesize_field(const std::vector<ModeFunction>& modes, const std::vector<FiberFamily>& families,
                                   const FieldSpec& spec) {
  require(!modes.empty() && modes.size() == families.size(), "one family per mode required");
  require(spec.x_stride >= 1 && spec.y_max > 0.0 && spec.y_step > 0.0, "invalid field specification");
  const FiberGrid g = families.front().grid();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    check_family(modes[m], families[m]);
    require(families[m].grid() == g, "families must share the x-grid");
  }
  HalfPlaneFunction out;
  out.modes = modes;
  for (std::size_t i = 0; i < g.n_points; i += spec.x_stride) out.x.push_back(g.x(i));
  const auto ny = static_cast<std::size_t>(std::llround(2.0 * spec.y_max / spec.y_step));
  for (std::size_t j = 0; j <= ny; ++j) out.y.push_back(-spec.y_max + 2.0 * spec.y_max * static_cast<double>(j) / static_cast<double>(ny));
  const std::size_t NX = out.x.size(), NY = out.y.size();

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(NX), static_cast<Eigen::Index>(NY));
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto& k = modes[m].k_grid();
    if (spec.y_max * max_step(k) > 0.5)
      fail(ErrorKind::unresolved_oscillation, "|y| times the k-step exceeds 0.5");
    const auto w = trapezoid_weights(k);
    const auto NK = static_cast<Eigen::Index>(k.size());
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(NX), NK);
    for (std::size_t i = 0; i < NX; ++i)
      for (std::size_t j = 0; j < k.size(); ++j)
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            kInvSqrt2Pi * w[j] * modes[m].samples()[j] * families[m].u(j)[i * spec.x_stride];
    Eigen::MatrixXcd E(NK, static_cast<Eigen::Index>(NY));
    for (std::size_t j = 0; j < k.size(); ++j)
      for (std::size_t l = 0; l < NY; ++l)
        E(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = std::polar(1.0, k[j] * out.y[l]);
    total.noalias() += A * E;
  }
  out.values.resize(NX * NY);
  for (std::size_t i = 0; i < NX; ++i)
    for (std::size_t l = 0; l < NY; ++l)
      out.values[i * NY + l] = total(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
  return out;
}

ModeFunction project_mode(const HalfPlaneFunction& f, const FiberFamily& family) {
  require(f.has_grid(), "projection needs grid samples");
  const auto& k = family.k_grid();
  const FiberGrid g = family.grid();
  const std::size_t NX = f.x.size(), NY = f.y.size();
  require(NX >= 2 && NY >= 2, "sample grid too small");

  double kmax = max_abs(k);
  for (const auto& m : f.modes) kmax = std::max(kmax, max_abs(m.k_grid()));
  if (max_step(f.y) * kmax >= std::numbers::pi)
    fail(ErrorKind::aliasing, "y-step does not resolve the k-range (Nyquist)");

  // x-nodes must be fiber-grid nodes
  std::vector<std::size_t> xi(NX);
  for (std::size_t i = 0; i < NX; ++i) {
    const double s = f.x[i] / g.h;
    const auto r = static_cast<std::size_t>(std::llround(s));
    require(std::abs(s - static_cast<double>(r)) < 1e-6 && r < g.n_points, "field x-nodes must lie on the fiber grid");
    xi[i] = r;
  }

  const auto wy = trapezoid_weights(f.y);
  const auto wx = trapezoid_weights(f.x);
  // truncation: mass in the outer tenth of the y-range
  double total = 0.0, outer = 0.0;
  const double ycut = 0.9 * std::max(std::abs(f.y.front()), std::abs(f.y.back()));
  for (std::size_t i = 0; i < NX; ++i)
    for (std::size_t l = 0; l < NY; ++l) {
      const double m = wx[i] * wy[l] * std::norm(f.at(i, l));
      total += m;
      if (std::abs(f.y[l]) > ycut) outer += m;
    }
  if (total > 0.0 && outer > 1e-8 * total)
    fail(ErrorKind::truncation, "field mass reaches the edge of the y-rectangle");

  const auto NK = static_cast<Eigen::Index>(k.size());
  Eigen::MatrixXcd F(static_cast<Eigen::Index>(NX), static_cast<Eigen::Index>(NY));
  for (std::size_t i = 0; i < NX; ++i)
    for (std::size_t l = 0; l < NY; ++l)
      F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = wx[i] * wy[l] * f.at(i, l);
  Eigen::MatrixXcd E(static_cast<Eigen::Index>(NY), NK);
  for (std::size_t l = 0; l < NY; ++l)
    for (std::size_t j = 0; j < k.size(); ++j)
      E(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = kInvSqrt2Pi * std::polar(1.0, -k[j] * f.y[l]);
  const Eigen::MatrixXcd G = F * E;  // NX x NK
  std::vector<cplx> samples(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    cplx s = 0.0;
    const auto& u = family.u(j);
    for (std::size_t i = 0; i < NX; ++i) s += G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * u[xi[i]];
    samples[j] = s;
  }
  return ModeFunction::from_samples(family.n(), k, std::move(samples));
}

double harmonic_profile(const ModeFunction& mode, const FiberFamily& family, double x) {
  check_family(mode, family);
  require(x >= 0.0, "x must be nonnegative");
  const auto& k = mode.k_grid();
  const auto w = trapezoid_weights(k);
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double u = family.u_at(j, x);
    s += w[j] * u * u * std::norm(mode.samples()[j]);
  }
  return s;
}

double weighted_norm(const HalfPlaneFunction& f, double s) {
  require(f.has_grid(), "weighted norm needs grid samples");
  require(s >= 0.0, "weight exponent must be nonnegative");
  const auto wx = trapezoid_weights(f.x);
  const auto wy = trapezoid_weights(f.y);
  const double ycut = 0.9 * std::max(std::abs(f.y.front()), std::abs(f.y.back()));
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < f.x.size(); ++i)
    for (std::size_t l = 0; l < f.y.size(); ++l) {
      const double m = wx[i] * wy[l] * std::pow(1.0 + f.y[l] * f.y[l], s) * std::norm(f.at(i, l));
      total += m;
      if (std::abs(f.y[l]) > ycut) outer += m;
    }
  if (total > 0.0 && outer > 1e-6 * total)
    fail(ErrorKind::rectangle_too_small, "weighted mass reaches the edge of the y-rectangle");
  return std::sqrt(total);
}

cplx transported_mode(const ModeFunction& mode, const BandTable& band, double lam) {
  require(mode.n() == band.n(), "mode and band belong to different bands");
  if (lam - band.threshold() < BandTable::gap_floor && mode.support().bounded() &&
      mode.support().hi < band.k_floor())
    return 0.0;
  const double k = band.invert(lam);
  return mode(k) / std::sqrt(std::abs(band.derivative(k)));
}

MembershipReport membership_report(const ModeFunction& mode, const BandTable& band, double alpha, double s) {
  require(mode.n() == band.n(), "mode and band belong to different bands");
  require(alpha >= 0.0 && alpha < std::min(1.0, s - 0.5), "alpha must lie in [0, min(1, s - 1/2))");
  constexpr std::size_t kRegressionNodes = 10;
  constexpr std::size_t kMinNodes = 8;
  constexpr double kExponentMargin = 0.05;

  MembershipReport rep;
  rep.n = mode.n();
  rep.alpha = alpha;
  rep.s = s;

  // geometric energy grid accumulating at E_n
  const double top = std::min(1.0, band.lambda_max() - band.threshold());
  std::vector<double> gaps;
  for (double g = BandTable::gap_floor; g <= top; g *= 2.0) gaps.push_back(g);
  if (gaps.size() < kMinNodes)
    fail(ErrorKind::insufficient_tail_resolution, "fewer than 8 energy nodes above the threshold");
  std::vector<cplx> phi(gaps.size());
  std::vector<double> wf(gaps.size());
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    const double k = band.invert_gap(gaps[j]);
    const cplx fk = mode(k);
    phi[j] = fk / std::sqrt(std::abs(band.derivative(k)));
    wf[j] = weight_w_alpha(band, k, alpha) * std::abs(fk);
  }
  double sup_phi = 0.0;
  for (const auto& v : phi) sup_phi = std::max(sup_phi, std::abs(v));
  for (std::size_t i = 0; i < mode.k_grid().size(); ++i) {
    const double k = mode.k_grid()[i];
    if (k < band.k_first() || k > band.k_floor()) continue;
    sup_phi = std::max(sup_phi, std::abs(mode.samples()[i]) / std::sqrt(std::abs(band.derivative(k))));
  }
  rep.vanishing_value = std::abs(phi.front());
  rep.vanishing_tolerance = 1e-3 * sup_phi;
  const bool vanishes = rep.vanishing_value <= rep.vanishing_tolerance;
  const cplx limit = vanishes ? cplx(0.0) : phi.front();

  // regression over the nodes closest to the threshold
  const std::size_t m = std::min(kRegressionNodes, gaps.size());
  rep.regression_nodes = m;
  std::vector<double> lx, ly;
  std::size_t zeros = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = std::abs(phi[j] - limit);
    if (d == 0.0) ++zeros;
    else {
      lx.push_back(gaps[j]);
      ly.push_back(d);
    }
  }
  // exact zeros next to the threshold: support ends before E_n
  if (zeros == m || (vanishes && phi.front() == cplx(0.0))) {
    rep.tail_exponent = std::numeric_limits<double>::infinity();
    rep.tail_constant = 0.0;
  } else {
    if (lx.size() < kMinNodes)
      fail(ErrorKind::insufficient_tail_resolution, "fewer than 8 nonzero nodes in the regression window");
    rep.tail_exponent = loglog_slope(lx, ly);
    double acc = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j) acc += std::log(ly[j]) - rep.tail_exponent * std::log(lx[j]);
    rep.tail_constant = std::exp(acc / static_cast<double>(lx.size()));
  }

  if (rep.tail_exponent < alpha - kExponentMargin) {
    rep.holder_constant_estimate = std::numeric_limits<double>::infinity();
  } else if (alpha == 0.0) {
    double worst = 0.0;
    for (const auto& v : phi) worst = std::max(worst, std::abs(v - limit));
    rep.holder_constant_estimate = worst;
  } else {
    std::vector<std::pair<cplx, cplx>> samples;
    samples.emplace_back(cplx(0.0), limit);
    for (std::size_t j = 0; j < gaps.size(); ++j) samples.emplace_back(cplx(gaps[j]), phi[j]);
    rep.holder_constant_estimate = holder_constant(samples, alpha);
  }

  double sup_w = 0.0;
  for (double v : wf) sup_w = std::max(sup_w, v);
  for (std::size_t i = 0; i < mode.k_grid().size(); ++i) {
    const double k = mode.k_grid()[i];
    if (k < band.k_first() || k > band.k_floor()) continue;
    sup_w = std::max(sup_w, weight_w_alpha(band, k, alpha) * std::abs(mode.samples()[i]));
  }
  std::vector<double> wx, wy;
  for (std::size_t j = 0; j < m; ++j)
    if (wf[j] > 0.0) {
      wx.push_back(gaps[j]);
      wy.push_back(wf[j]);
    }
  const bool w_grows = wx.size() >= kMinNodes && loglog_slope(wx, wy) < -kExponentMargin;
  rep.w_alpha_sup = w_grows ? std::numeric_limits<double>::infinity() : sup_w;

  const bool finite_h = std::isfinite(rep.holder_constant_estimate);
  const bool finite_w = std::isfinite(rep.w_alpha_sup);
  if (rep.vanishing_value > 10.0 * rep.vanishing_tolerance) {
    rep.verdict = Verdict::out;
    rep.reason = "mu_n f_n does not vanish at the threshold";
  } else if (!finite_h || !finite_w) {
    rep.verdict = Verdict::out;
    rep.reason = !finite_h ? "tail exponent below alpha" : "w_n^alpha f_n unbounded";
  } else if (!vanishes) {
    rep.verdict = Verdict::undecided;
    rep.reason = "threshold value within a decade of the tolerance";
  } else if (std::isfinite(rep.tail_exponent) && std::abs(rep.tail_exponent - alpha) < kExponentMargin) {
    rep.verdict = Verdict::undecided;
    rep.reason = "tail exponent indistinguishable from alpha";
  } else {
    rep.verdict = Verdict::in;
    rep.reason = "vanishes at the threshold with Holder tail and bounded weighted coefficient";
  }
  return rep;
}

}  // namespace edgelap
