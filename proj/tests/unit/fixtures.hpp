#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "edgelap/band.hpp"
#include "edgelap/modes.hpp"

namespace fixtures {

// Bands 1..3 on the default grid, built once per binary.
inline const std::vector<edgelap::BandTablePtr>& atlas() {
  static const auto bands = edgelap::build_band_atlas(3, edgelap::default_k_grid());
  return bands;
}

inline const edgelap::BandTable& band(int n) { return *atlas()[static_cast<std::size_t>(n - 1)]; }

inline edgelap::ModeFunction mode(const std::string& text, double step = 0.02) {
  const auto d = edgelap::ModeDescriptor::parse(text);
  const auto& b = atlas()[static_cast<std::size_t>(d.n - 1)];
  return edgelap::ModeFunction::from_descriptor(d, edgelap::mode_k_grid(d, b.get(), step), b);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Parabolic cylinder roots (mpmath, 30 digits), see tests/oracle/fiber_oracle.py.
struct BandPoint {
  int n;
  double k;
  double lambda;
};
inline constexpr BandPoint kBandOracle[] = {
    {1, -3.0, 17.520389098334875}, {1, -2.0, 10.884333506701228}, {1, -1.0, 6.0743910616078776},
    {1, 0.0, 3.0},                 {1, 1.0, 1.4684677434670867},  {1, 2.0, 1.0357633946055064},
    {1, 3.0, 1.0003908239797834},  {2, 0.0, 7.0},                 {2, -1.0, 11.207646834634139},
};
inline constexpr double kGap1At3 = 3.9082397978339547e-4;
inline constexpr double kGap1At4 = 4.9085594801747635e-7;
inline constexpr double kOverlap03 = 0.31525515831185046;
inline constexpr double kOverlap01 = 0.9563287381791623;

}  // namespace fixtures
