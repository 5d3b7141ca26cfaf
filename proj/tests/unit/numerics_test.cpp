#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelap/error.hpp"
#include "edgelap/format.hpp"
#include "edgelap/interp.hpp"
#include "edgelap/quadrature.hpp"
#include "edgelap/tridiag.hpp"

using namespace edgelap;

TEST_CASE("fixed float formatting") {
  CHECK(format_double(1.0) == "1.0000000000000000e+00");
  CHECK(format_double(-0.1) == "-1.0000000000000001e-01");
  CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
  CHECK(format_complex({1.0, -2.0}).find("-2.") != std::string::npos);
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("2+0.5i") == cplx(2.0, 0.5));
  CHECK(parse_complex("0-0.5i") == cplx(0.0, -0.5));
  CHECK(parse_complex("0.5i") == cplx(0.0, 0.5));
  CHECK(parse_complex("-1.5e-3") == cplx(-1.5e-3, 0.0));
  CHECK_THROWS_AS(parse_complex("2 + i"), Error);
  CHECK_THROWS_AS(parse_complex("abc"), Error);
  CHECK_THROWS_AS(parse_real("1.0x"), Error);
}

TEST_CASE("csv table") {
  const std::string t = csv_table({"a", "b"}, {{1.0, 2.0}});
  CHECK(t == "a,b\n1.0000000000000000e+00,2.0000000000000000e+00\n");
}

TEST_CASE("hermite interpolation") {
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::exp(-x.back()));
  }
  const auto p = HermiteCubic::monotone(x, y);
  CHECK(p(1.234) == doctest::Approx(std::exp(-1.234)).epsilon(1e-5));
  CHECK(p.inverse(p(2.71)) == doctest::Approx(2.71).epsilon(1e-12));
  for (double t = 0.0; t < 4.0; t += 0.013) CHECK(p.derivative(t) <= 0.0);
  const auto s = HermiteCubic::smooth(x, y);
  CHECK(s(0.3) == doctest::Approx(y[3]));
}

TEST_CASE("quadrature") {
  auto f = [](double t) { return cplx(std::cos(t), std::sin(t)); };
  CHECK(std::abs(integrate_gk(f, 0.0, 1.0).value - cplx(std::sin(1.0), 1.0 - std::cos(1.0))) <= 1e-13);
  // endpoint singularity
  auto g = [](double t) { return cplx(1.0 / std::sqrt(t), 0.0); };
  CHECK(std::abs(integrate_ts(g, 0.0, 1.0).value - 2.0) <= 1e-10);
  const auto pts = graded_points(0.0, 1.0, 0.5, 1e-3);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK(std::find(pts.begin(), pts.end(), 0.5) != pts.end());
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  CHECK(std::abs(integrate_panels(f, pts).value - integrate_gk(f, 0.0, 1.0).value) <= 1e-13);
}

TEST_CASE("tridiagonal pencil") {
  // -u'' on (0, pi), 200 interior nodes, second-order stencil and identity mass
  const std::size_t m = 200;
  const double h = std::numbers::pi / (m + 1);
  SymTridiag a{std::vector<double>(m, 2.0 / (h * h)), std::vector<double>(m - 1, -1.0 / (h * h))};
  SymTridiag b{std::vector<double>(m, 1.0), std::vector<double>(m - 1, 0.0)};
  TridiagPencil p(a, b);
  for (std::size_t j = 0; j < 3; ++j) {
    const double exact = 4.0 / (h * h) * std::pow(std::sin((j + 1) * h / 2), 2);
    CHECK(p.bisect(j) == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(p.count_below(1.5) == 1);
  const auto v = p.inverse_iteration(p.bisect(0));
  CHECK(p.b_inner(v, v) == doctest::Approx(1.0));
  const auto av = a.apply(v);
  for (std::size_t i = 0; i < m; i += 37) CHECK(av[i] == doctest::Approx(p.bisect(0) * v[i]).epsilon(1e-8));

  const auto x = solve_tridiagonal({1.0, 1.0}, {4.0, 4.0, 4.0}, {1.0, 1.0}, {5.0, 6.0, 5.0});
  for (double xi : x) CHECK(xi == doctest::Approx(1.0));
}
