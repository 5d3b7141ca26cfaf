#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelap/band.hpp"
#include "edgelap/error.hpp"
#include "fixtures.hpp"

using namespace edgelap;
using fixtures::band;
using fixtures::rel;

TEST_CASE("table anchors and oracle values") {
  CHECK(rel(band(1).evaluate(0.0), 3.0) <= 1e-6);
  CHECK(rel(band(2).evaluate(0.0), 7.0) <= 1e-6);
  for (const auto& p : fixtures::kBandOracle) {
    CAPTURE(p.k);
    CHECK(std::abs(band(p.n).evaluate(p.k) - p.lambda) <= 1e-8);
  }
  CHECK(rel(band(1).gap(3.0), fixtures::kGap1At3) <= 1e-6);
  CHECK(rel(band(1).gap(4.0), fixtures::kGap1At4) <= 1e-4);
}

TEST_CASE("interpolation between nodes") {
  // 1.0 and 2.0 are nodes; check a midpoint against a direct solve.
  for (double k : {-1.525, 0.7125, 2.5125}) {
    const double direct = solve_fiber(k, 1, {})[0].lambda;
    CAPTURE(k);
    CHECK(std::abs(band(1).evaluate(k) - direct) <= 1e-7 * direct);
  }
}

TEST_CASE("strictly above the landau level and decreasing") {
  for (int n = 1; n <= 3; ++n) {
    const auto& t = band(n);
    for (std::size_t i = 0; i < t.k_grid().size(); ++i) {
      CHECK(t.lambda()[i] > t.threshold());
      CHECK(t.lambda_prime()[i] < 0.0);
      if (i) CHECK(t.lambda()[i] < t.lambda()[i - 1]);
    }
  }
}

TEST_CASE("inversion") {
  const auto& t = band(1);
  double worst = 0.0;
  for (double k : t.k_grid()) worst = std::max(worst, std::abs(t.invert(t.evaluate(k)) - k));
  CHECK(worst <= 1e-8);
  CHECK(std::abs(t.invert(3.0)) <= 1e-6);
  CHECK(std::abs(t.invert(t.evaluate(-2.0)) + 2.0) <= 1e-6);
  for (double k = -3.9; k < 4.4; k += 0.37) CHECK(std::abs(t.invert(t.evaluate(k)) - k) <= 1e-8);
}

TEST_CASE("inversion just above the threshold follows the asymptotic model") {
  const auto& t = band(1);
  const double gap = 1e-4, C1 = asymptotic_constant(1);
  double k = 3.0;
  for (int i = 0; i < 50; ++i) k = std::sqrt(std::log(C1 * k / gap));
  CHECK(std::abs(t.invert(1.0 + gap) - k) <= 0.02);
  CHECK(t.invert(1.0 + 1e-11) > t.k_last());
  CHECK_THROWS_AS(t.invert(1.0 + 1e-13), Error);
  CHECK_THROWS_AS(t.invert(t.lambda_max() + 1.0), Error);
}

TEST_CASE("tail model continues the table") {
  const auto& t = band(1);
  const double k = t.k_last();
  CHECK(std::abs(t.log_gap(k + 1e-9) - t.log_gap(k - 1e-9)) <= 1e-7);
  CHECK(t.model_derived(k + 0.1));
  CHECK(t.k_floor() == doctest::Approx(5.4245).epsilon(1e-4));
  CHECK(std::abs(t.gap(t.k_floor()) / BandTable::gap_floor - 1.0) <= 1e-6);
}

TEST_CASE("density of states weight") {
  const auto& t = band(1);
  const double d0 = band_derivative(solve_fiber(0.0, 1, {})[0]);
  CHECK(rel(weight_mu(t, 3.0), 1.0 / std::sqrt(std::abs(d0))) <= 1e-6);
  CHECK(weight_mu(t, 1.01) > weight_mu(t, 1.02));
  // mu grows like e^{k^2/2}/k up to bounded factors
  for (double lam : {1.0 + 1e-4, 1.0 + 1e-7, 1.0 + 1e-10}) {
    const double k = t.invert(lam);
    const double ratio = weight_mu(t, lam) * k / std::exp(k * k / 2);
    CHECK(ratio > 0.2);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("absorption weight") {
  const auto& t = band(1);
  for (double k : {-2.0, 0.0, 1.5}) CHECK(rel(weight_w_alpha(t, k, 0.0), weight_mu(t, t.evaluate(k))) <= 1e-8);
  const double predicted = weight_w_alpha_asymptotic(1, 3.0, 0.4);
  const auto m = asymptotic_model(1, 0.4);
  CHECK(rel(predicted, m.C_n_alpha * std::pow(3.0, -1.8 + 0.4) * std::exp(9.0 * 0.9)) <= 1e-12);
  CHECK(rel(weight_w_alpha(t, 3.0, 0.4), predicted) <= 0.20);
}

TEST_CASE("asymptotic constants") {
  CHECK(asymptotic_constant(1) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)));
  CHECK(asymptotic_constant(2) == doctest::Approx(4.0 / std::sqrt(std::numbers::pi)));
  CHECK(rel(band(1).gap(3.0), gap_asymptotic(1, 3.0)) <= 0.15);
  const auto f1 = asymptotic_check(band(1), 2.5, 3.5);
  const auto f2 = asymptotic_check(band(2), 2.5, 3.5);
  CHECK(f1.gap_prefactor_rel_error <= 0.05);
  CHECK(f2.gap_prefactor_rel_error <= 0.10);
  CHECK(f1.derivative_prefactor_rel_error <= 0.05);
}

TEST_CASE("log-derivative at k = 3 carries the (2n-1)/k correction") {
  // exact: lambda'/(lambda-1) = -5.613 at k = 3, not -6
  const auto p = asymptotic_point(band(1), 3.0);
  CHECK(p.log_derivative == doctest::Approx(-5.6130).epsilon(2e-4));
  CHECK(p.log_derivative_rel_dev == doctest::Approx(0.0645).epsilon(0.01));
}

TEST_CASE("csv schema") {
  const std::string csv = band_table_csv(band(1));
  CHECK(csv.rfind("k,lambda,lambda_prime,mu\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == band(1).k_grid().size() + 1);
}

TEST_CASE("grid helpers") {
  const auto g = default_k_grid();
  CHECK(g.front() == -4.0);
  CHECK(g.back() == doctest::Approx(4.5));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(uniform_grid(0.0, 1.0, 0.25).size() == 5);
  CHECK_THROWS_AS(BandTable::build(1, {0.0}), Error);
}
