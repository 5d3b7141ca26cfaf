#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelap/error.hpp"
#include "edgelap/lap.hpp"
#include "fixtures.hpp"

using namespace edgelap;
using fixtures::atlas;
using fixtures::band;
using fixtures::mode;

TEST_CASE("rn off the axis") {
  const auto g = mode("gauss:n=1,k0=0.5,w=0.5");
  SUBCASE("zero mode") {
    const auto z = ModeFunction::zero(1, g.k_grid());
    CHECK(rn_value(z, z, band(1), {2.0, 0.5}) == cplx(0.0, 0.0));
  }
  SUBCASE("real point below the band") {
    const auto b = mode("bump:n=1,k0=0.5,w=0.5");
    const cplx v = rn_value(b, b, band(1), {0.0, 0.0});
    CHECK(v.real() > 0.0);
    CHECK(v.imag() == 0.0);
    CHECK_THROWS_AS(rn_value(b, b, band(1), {1.5, 0.0}), Error);
  }
  SUBCASE("energy-space change of variables") {
    const auto& t = band(1);
    const cplx z(2.0, 0.5);
    const double lo = t.evaluate(std::min(g.support().hi, t.k_floor()));
    const double hi = t.evaluate(g.support().lo);
    const auto q = integrate_gk([&](double lam) { return energy_density(g, g, t, lam) / (lam - z); }, lo, hi, 1e-13);
    CHECK(std::abs(rn_value(g, g, t, z) - q.value) <= 1e-8);
  }
  SUBCASE("herglotz and reflection") {
    for (cplx z : {cplx(1.2, 0.01), cplx(3.0, 1.0), cplx(0.5, 2.0), cplx(1.0, 1e-4)}) {
      const cplx v = rn_value(g, g, band(1), z);
      CAPTURE(z);
      CHECK(v.imag() > 0.0);
      CHECK(std::abs(rn_value(g, g, band(1), std::conj(z)) - std::conj(v)) <= 1e-12 * std::abs(v));
    }
  }
}

TEST_CASE("boundary values of rn") {
  const auto b = mode("bump:n=1,k0=1.1,w=0.8");
  const auto& t = band(1);
  SUBCASE("below the threshold both sides agree") {
    const auto p = rn_boundary(b, b, t, 0.5, Side::plus);
    const auto m = rn_boundary(b, b, t, 0.5, Side::minus);
    CHECK(std::abs(p.value - m.value) <= 1e-10);
    CHECK(p.value.imag() == 0.0);
  }
  SUBCASE("jump and imaginary part") {
    for (double lam : {1.2, 1.5, 2.0}) {
      const auto p = rn_boundary(b, b, t, lam, Side::plus);
      const auto m = rn_boundary(b, b, t, lam, Side::minus);
      const cplx h = energy_density(b, b, t, lam);
      CAPTURE(lam);
      CHECK(std::abs(p.value - m.value - cplx(0.0, 2.0 * std::numbers::pi) * h) <= 1e-8);
      CHECK(p.value.imag() == doctest::Approx(std::numbers::pi * h.real()).epsilon(1e-10));
    }
  }
  SUBCASE("epsilon approach") {
    const double lam = 1.5;
    const cplx limit = rn_boundary(b, b, t, lam, Side::plus).value;
    double prev = INFINITY;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const double d = std::abs(rn_value(b, b, t, {lam, eps}) - limit);
      CAPTURE(eps);
      CHECK(d < prev);
      CHECK(d <= 50.0 * eps);
      prev = d;
    }
  }
  SUBCASE("refusals") {
    const auto flat = mode("flat:n=1");
    CHECK_THROWS_AS(rn_boundary(flat, flat, t, 1.2, Side::plus), Error);
    LapOptions neg;
    neg.negative_control = true;
    CHECK(std::isfinite(std::abs(rn_boundary(flat, flat, t, 1.2, Side::plus, neg).value)));
    CHECK_THROWS_AS(rn_boundary(b, b, t, 1.0 + 1e-13, Side::plus), Error);
    CHECK_THROWS_AS(rn_boundary(b, b, t, t.lambda_max() + 1.0, Side::plus), Error);
  }
}

TEST_CASE("resolvent elements") {
  const auto f1 = mode("gauss:n=1,k0=0.5,w=0.5");
  const auto f2 = mode("gauss:n=2,k0=0,w=0.5");
  ResolventQuery q;
  q.point = SpectralPoint::off_axis({2.0, 0.5});
  SUBCASE("disjoint modes") {
    q.f = {f1};
    q.g = {f2};
    CHECK(std::abs(resolvent_element(q, atlas()).value) == 0.0);
  }
  SUBCASE("single mode") {
    q.f = q.g = {f1};
    const auto r = resolvent_element(q, atlas());
    CHECK(r.value == rn_value(f1, f1, band(1), q.point.z));
    CHECK(r.method_tags.at(1) == LapMethod::k_space);
    CHECK(r.tail_bound == 0.0);
  }
  SUBCASE("additive over modes") {
    q.f = q.g = {f1, f2};
    const auto r = resolvent_element(q, atlas());
    CHECK(std::abs(r.value - r.per_mode.at(1) - r.per_mode.at(2)) <= 1e-15);
  }
  SUBCASE("cutoff moves modes into the tail bound") {
    q.f = q.g = {f1, f2};
    q.mode_cutoff = 1;
    const auto r = resolvent_element(q, atlas());
    CHECK(r.per_mode.size() == 1);
    const double d = 3.0 - 2.0;
    CHECK(r.tail_bound == doctest::Approx(std::max(1.0 / d, 1.0 / (d * d)) * f2.norm_squared()));
  }
  SUBCASE("boundary point tags") {
    const auto b = mode("bump:n=1,k0=1.1,w=0.8");
    q.f = q.g = {b};
    q.point = SpectralPoint::boundary(1.2, Side::plus);
    const auto r = resolvent_element(q, atlas());
    CHECK(r.method_tags.at(1) != LapMethod::k_space);
  }
}

TEST_CASE("spectral projector") {
  const auto b = mode("bump:n=1,k0=1.1,w=0.8");
  const auto& t = band(1);
  const double top = t.evaluate(b.support().lo);
  CHECK(std::abs(spectral_projector_element({b}, {b}, 1.0, top + 1.0, atlas()) / b.norm_squared() - 1.0) <= 1e-3);
  CHECK(std::abs(spectral_projector_element({b}, {b}, -1.0, 0.99, atlas())) <= 1e-12);
  const auto c = mode("bump:n=2,k0=1.1,w=0.8");
  CHECK(std::abs(spectral_projector_element({b}, {c}, 1.0, 20.0, atlas())) == 0.0);
  // additivity over adjacent intervals
  const cplx whole = spectral_projector_element({b}, {b}, 1.0, 2.5, atlas());
  const cplx parts =
      spectral_projector_element({b}, {b}, 1.0, 1.6, atlas()) + spectral_projector_element({b}, {b}, 1.6, 2.5, atlas());
  CHECK(std::abs(whole - parts) <= 1e-9);
}

TEST_CASE("holder certificates") {
  SUBCASE("window away from thresholds") {
    const auto b = mode("bump:n=1,k0=0.5,w=1");
    const Window K{1.5, 2.5, 0.0, 0.1};
    const auto coarse = holder_certificate({b}, {b}, K, atlas(), 9);
    const auto fine = holder_certificate({b}, {b}, K, atlas(), 17);
    CHECK(std::isfinite(coarse.constant));
    CHECK(std::abs(fine.constant / coarse.constant - 1.0) <= 0.2);
  }
  SUBCASE("window containing the first threshold") {
    const auto h = mode("holder:n=1,p=0.5");
    const Window K{0.9, 1.5, 0.0, 0.1};
    const auto c = holder_certificate({h}, {h}, K, atlas(), 9);
    CHECK(std::isfinite(c.constant));
    CHECK(c.constant >= std::max(c.constant_plus, c.constant_minus));
    CHECK(c.csv().rfind("z_re,z_im,side,re,im\n", 0) == 0);
    const auto flat = mode("flat:n=1");
    CHECK_THROWS_AS(holder_certificate({flat}, {flat}, K, atlas(), 9), Error);
  }
  SUBCASE("lattice") {
    const Window K{0.9, 1.5, 0.0, 0.1};
    const auto pts = holder_lattice(K, 9, atlas());
    for (const cplx& z : pts) {
      CHECK(z.real() >= K.re_lo);
      CHECK(z.real() <= K.re_hi);
      CHECK(z.imag() >= 0.0);
      CHECK(z != cplx(1.0, 0.0));
    }
    const auto big = holder_lattice(K, 17, atlas());
    CHECK(big.size() * (big.size() - 1) / 2 <= kHolderPairBudget);
    CHECK_THROWS_AS(holder_certificate({}, {}, K, atlas(), 33), Error);
  }
}
