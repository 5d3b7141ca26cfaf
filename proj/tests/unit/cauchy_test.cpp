#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelap/cauchy.hpp"
#include "edgelap/error.hpp"

using namespace edgelap;
using std::numbers::pi;

namespace {

DensityFunction bump_density() {
  return DensityFunction::from_function(0.0, 1.0, [](double t) {
    const double s = 2.0 * t - 1.0;
    return cplx(std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0, 0.0);
  });
}

}  // namespace

TEST_CASE("off-axis closed forms") {
  const auto one = DensityFunction::constant(0.0, 1.0, 1.0);
  CHECK(std::abs(offaxis_cauchy(one, {0.0, 1.0}).value - std::log(cplx(1.0, 1.0))) <= 1e-10);
  CHECK(std::abs(offaxis_cauchy(DensityFunction::constant(0.0, 1.0, 0.0), {0.3, 0.2}).value) == 0.0);
  const auto id = DensityFunction::from_function(0.0, 1.0, [](double t) { return cplx(t, 0.0); });
  const cplx z(2.0, 1.0);
  const cplx want = 1.0 + z * std::log((1.0 - z) / (0.0 - z));
  CHECK(std::abs(offaxis_cauchy(id, z).value - want) <= 1e-10);
}

TEST_CASE("boundary values") {
  const auto on02 = DensityFunction::constant(0.0, 2.0, 1.0);
  CHECK(std::abs(boundary_value(on02, 1.0, Side::plus).value - cplx(0.0, pi)) <= 1e-10);
  const auto one = DensityFunction::constant(0.0, 1.0, 1.0);
  CHECK(std::abs(boundary_value(one, 0.25, Side::minus).value - cplx(std::log(3.0), -pi)) <= 1e-10);
  const auto psi = bump_density();
  const auto p = boundary_value(psi, 0.5, Side::plus);
  const auto m = boundary_value(psi, 0.5, Side::minus);
  CHECK(std::abs(p.value - m.value - cplx(0.0, 2.0 * pi) * psi(0.5)) <= 1e-8);
  CHECK(std::abs(p.value - offaxis_cauchy(psi, {0.5, 1e-6}).value) <= 1e-5);
  CHECK(std::abs(m.value - offaxis_cauchy(psi, {0.5, -1e-6}).value) <= 1e-5);
}

TEST_CASE("epsilon sweeps") {
  const std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  SUBCASE("smooth density converges linearly") {
    const auto s = epsilon_sweep(bump_density(), 0.3, Side::plus, eps);
    CHECK(s.monotone);
    CHECK(s.rate == doctest::Approx(1.0).epsilon(0.1));
  }
  SUBCASE("zero density") {
    const auto s = epsilon_sweep(DensityFunction::constant(0.0, 1.0, 0.0), 0.5, Side::plus, eps);
    for (const auto& r : s.rows) CHECK(r.difference == 0.0);
  }
  SUBCASE("holder density converges at its exponent") {
    const double lam = 0.5;
    const auto psi = DensityFunction::from_function(
        0.0, 1.0, [=](double t) { return cplx(std::pow(std::abs(t - lam), 0.4), 0.0); }, 0.4);
    const auto s = epsilon_sweep(psi, lam, Side::plus, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    CHECK(s.monotone);
    CHECK(std::abs(s.rate - 0.4) <= 0.1);
  }
}

TEST_CASE("holder constants") {
  std::vector<std::pair<cplx, cplx>> line, flat;
  for (int i = 0; i <= 10; ++i) {
    const cplx z(0.1 * i, 0.0);
    line.emplace_back(z, z);
    flat.emplace_back(z, 2.0);
  }
  CHECK(holder_constant(line, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holder_constant(flat, 0.4) == 0.0);

  auto sampled = [](int m) {
    const auto psi = bump_density();
    std::vector<std::pair<cplx, cplx>> s;
    for (int i = 0; i < m; ++i) {
      const double lam = 0.05 + 0.9 * i / (m - 1);
      s.emplace_back(lam, boundary_value(psi, lam, Side::plus).value);
    }
    return holder_constant(s, 0.4);
  };
  const double coarse = sampled(10), fine = sampled(19);
  CHECK(std::isfinite(coarse));
  CHECK(std::abs(fine / coarse - 1.0) <= 0.2);
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1.0, 10.0, 100.0}, {2.0, 20.0, 200.0}) == doctest::Approx(1.0));
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(offaxis_cauchy(DensityFunction::constant(0.0, 1.0, 1.0), {0.5, 0.0}), Error);
  CHECK_THROWS_AS(boundary_value(DensityFunction::constant(0.0, 1.0, 1.0), 0.0, Side::plus), Error);
}
