#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelap/error.hpp"
#include "edgelap/modes.hpp"
#include "fixtures.hpp"

using namespace edgelap;
using fixtures::mode;
using fixtures::rel;

namespace {

FiberFamily family_for(const ModeFunction& m, const Discretization& base = {}) {
  return FiberFamily::solve(m.n(), m.k_grid(), common_discretization({m}, base));
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

}  // namespace

TEST_CASE("descriptor round trips") {
  const auto d = ModeDescriptor::parse("bump:n=2,k0=1.5,w=0.3");
  CHECK(d.kind == ModeKind::bump);
  CHECK(d.n == 2);
  CHECK(d.k0 == 1.5);
  CHECK(d.width == 0.3);
  const auto again = ModeDescriptor::parse(d.to_string());
  CHECK(again.to_string() == d.to_string());
  const auto j = ModeDescriptor::from_json(d.to_json());
  CHECK(j.to_json() == d.to_json());
  CHECK(ModeDescriptor::parse("holder:n=1,p=0.25").exponent == 0.25);
  CHECK(ModeDescriptor::parse("gauss:n=1,k0=0,w=1,a=2-1i").amplitude == cplx(2.0, -1.0));
  CHECK_THROWS_AS(ModeDescriptor::parse("bump:n=0"), Error);
  CHECK_THROWS_AS(ModeDescriptor::parse("wave:n=1"), Error);
  CHECK_THROWS_AS(ModeDescriptor::parse("bump:n=1,w=-1"), Error);
}

TEST_CASE("smooth step") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  double prev = 0.0;
  for (double t = 0.01; t < 1.0; t += 0.01) {
    CHECK(smooth_step(t) >= prev);
    prev = smooth_step(t);
  }
}

TEST_CASE("mode functions") {
  const auto b = mode("bump:n=1,k0=0.5,w=0.5");
  CHECK(b.support().lo == 0.0);
  CHECK(b.support().hi == 1.0);
  CHECK(b(0.5) == cplx(1.0, 0.0));
  CHECK(b(1.2) == cplx(0.0, 0.0));
  const auto g = mode("gauss:n=1,k0=0,w=0.5");
  CHECK(rel(g.norm_squared(), 0.5 * std::sqrt(std::numbers::pi / 2.0)) <= 1e-8);
  const auto s = ModeFunction::from_samples(1, b.k_grid(), b.samples());
  CHECK(std::abs(s(0.503) - b(0.503)) <= 1e-5);
  CHECK(ModeFunction::zero(1, b.k_grid()).norm_squared() == 0.0);
}

TEST_CASE("harmonic synthesis") {
  const auto b = mode("bump:n=1,k0=0.5,w=0.5");
  const auto fam = family_for(b);
  SUBCASE("dirichlet edge") { CHECK(synthesize_harmonic(b, fam, 0.0, 0.7) == cplx(0.0, 0.0)); }
  SUBCASE("zero mode") {
    const auto z = ModeFunction::zero(1, b.k_grid());
    CHECK(std::abs(synthesize_harmonic(z, fam, 1.0, 0.3)) == 0.0);
  }
  SUBCASE("y = 0 is the plain k-integral") {
    const double x = 1.3;
    std::vector<double> integrand;
    for (std::size_t j = 0; j < b.k_grid().size(); ++j) integrand.push_back(b.samples()[j].real() * fam.u_at(j, x));
    const cplx v = synthesize_harmonic(b, fam, x, 0.0);
    CHECK(v.imag() == doctest::Approx(0.0));
    CHECK(rel(v.real() * std::sqrt(2.0 * std::numbers::pi), trapezoid(b.k_grid(), integrand)) <= 1e-10);
  }
  SUBCASE("dense k oracle") {
    const auto g = mode("gauss:n=1,k0=0.5,w=0.5", 0.02);
    const auto h = mode("gauss:n=1,k0=0.5,w=0.5", 0.01);
    const auto fg = family_for(g), fh = family_for(h);
    for (double y : {0.0, 1.5, -4.0}) {
      const cplx a = synthesize_harmonic(g, fg, 1.7, y), c = synthesize_harmonic(h, fh, 1.7, y);
      CAPTURE(y);
      CHECK(std::abs(a - c) <= 1e-5 * std::abs(c));
    }
  }
}

TEST_CASE("parseval and projection") {
  const std::vector<ModeFunction> modes{mode("gauss:n=1,k0=0.5,w=0.5"), mode("gauss:n=2,k0=0,w=0.5"),
                                        mode("gauss:n=3,k0=-0.5,w=0.5")};
  const Discretization disc = common_discretization(modes, {});
  std::vector<FiberFamily> fams;
  double want = 0.0;
  for (const auto& m : modes) {
    fams.push_back(FiberFamily::solve(m.n(), m.k_grid(), disc));
    want += m.norm_squared();
  }
  const auto field = synthesize_field(modes, fams);
  const double norm = weighted_norm(field, 0.0);
  CHECK(rel(norm * norm, want) <= 1e-4);

  const auto p1 = project_mode(field, fams[0]);
  double worst = 0.0;
  for (std::size_t j = 0; j < p1.k_grid().size(); ++j)
    worst = std::max(worst, std::abs(p1.samples()[j] - modes[0].samples()[j]));
  CHECK(worst <= 1e-4 * modes[0].sup_abs());

  // mode 2 alone has no n = 1 component
  const auto only2 = synthesize_field({modes[1]}, {fams[1]});
  const auto leak = project_mode(only2, FiberFamily::solve(1, modes[0].k_grid(), disc));
  CHECK(leak.sup_abs() <= 1e-6);
}

TEST_CASE("projection is stable under grid refinement") {
  const auto g = mode("gauss:n=1,k0=0.5,w=0.5");
  const auto fam = family_for(g);
  FieldSpec coarse, fine;
  fine.x_stride = 2;
  fine.y_step = 0.025;
  const auto a = project_mode(synthesize_field({g}, {fam}, coarse), fam);
  const auto b = project_mode(synthesize_field({g}, {fam}, fine), fam);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.k_grid().size(); ++j) worst = std::max(worst, std::abs(a.samples()[j] - b.samples()[j]));
  CHECK(worst <= 1e-5);
}

TEST_CASE("sampling guards") {
  const auto g = mode("gauss:n=1,k0=0.5,w=0.5");
  const auto fam = family_for(g);
  FieldSpec wide;
  wide.y_max = 40.0;
  CHECK_THROWS_AS(synthesize_field({g}, {fam}, wide), Error);
  FieldSpec coarse_y;
  coarse_y.y_step = 2.0;
  CHECK_THROWS_AS(project_mode(synthesize_field({g}, {fam}, coarse_y), fam), Error);
}

TEST_CASE("harmonic profile") {
  const auto b = mode("bump:n=1,k0=0.5,w=0.5");
  const auto fam = family_for(b);
  CHECK(harmonic_profile(b, fam, 0.0) == 0.0);
  CHECK(harmonic_profile(b, fam, 8.0) <= std::exp(-0.7 * 49.0) * b.norm_squared());
  CHECK(harmonic_profile(b, fam, 1.0) > 0.0);
}

TEST_CASE("weighted norm") {
  std::vector<double> x, y;
  for (int i = 0; i <= 1000; ++i) x.push_back(0.01 * i);
  for (int j = -400; j <= 400; ++j) y.push_back(0.05 * j);
  SUBCASE("gaussian moments") {
    const auto f = HalfPlaneFunction::from_function(
        x, y, [](double a, double b) { return cplx(std::exp(-(a - 2.0) * (a - 2.0) / 2 - b * b / 2), 0.0); });
    const double sx = std::sqrt(std::numbers::pi) / 2 * (1.0 + std::erf(2.0));
    const double plain = std::sqrt(sx * std::sqrt(std::numbers::pi));
    const double s1 = std::sqrt(sx * std::sqrt(std::numbers::pi) * 1.5);
    CHECK(rel(weighted_norm(f, 0.0), plain) <= 1e-4);
    CHECK(rel(weighted_norm(f, 1.0), s1) <= 1e-4);
  }
  SUBCASE("compact in y") {
    const auto f = HalfPlaneFunction::from_function(x, y, [](double a, double b) {
      return std::abs(b) < 1.0 ? cplx(std::exp(-a) * std::pow(1.0 - b * b, 2), 0.0) : cplx(0.0);
    });
    for (double s : {0.5, 1.0, 2.0}) CHECK(weighted_norm(f, s) <= std::pow(2.0, s / 2) * weighted_norm(f, 0.0));
  }
  SUBCASE("mass at the rectangle edge is refused") {
    const auto f = HalfPlaneFunction::from_function(x, y, [](double, double) { return cplx(1.0, 0.0); });
    CHECK_THROWS_AS(weighted_norm(f, 1.0), Error);
  }
}

TEST_CASE("membership") {
  const auto& band = fixtures::band(1);
  SUBCASE("compact bump") {
    const auto r = membership_report(mode("bump:n=1,k0=0.5,w=0.5"), band, 0.4, 1.0);
    CHECK(r.verdict == Verdict::in);
    CHECK(r.vanishing_value == 0.0);
  }
  SUBCASE("flat threshold mode") {
    const auto m = mode("flat:n=1");
    CHECK(std::abs(transported_mode(m, band, 1.0 + 1e-9) - 1.0) <= 1e-6);
    const auto r = membership_report(m, band, 0.4, 1.0);
    CHECK(r.verdict == Verdict::out);
  }
  SUBCASE("holder threshold mode") {
    const auto m = mode("holder:n=1,p=0.5");
    const double lam = 1.0 + 1e-6;
    CHECK(rel(std::abs(transported_mode(m, band, lam)), std::sqrt(lam - 1.0)) <= 1e-6);
    const auto r = membership_report(m, band, 0.4, 1.0);
    CHECK(r.verdict == Verdict::in);
    CHECK(std::isfinite(r.w_alpha_sup));
    CHECK(r.tail_exponent == doctest::Approx(0.5).epsilon(0.02));
    CHECK(membership_report(m, band, 0.6, 1.2).verdict == Verdict::out);
  }
}
