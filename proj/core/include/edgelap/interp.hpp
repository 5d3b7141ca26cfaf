#pragma once

#include <cstddef>
#include <vector>

namespace edgelap {

// Piecewise cubic Hermite interpolant on strictly increasing nodes.
class HermiteCubic {
 public:
  HermiteCubic() = default;
  // With limit = true slopes are clipped by the Fritsch-Carlson rule, so monotone
  // data give a monotone curve.
  HermiteCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes, bool limit = true);
  // Shape-preserving slopes estimated from the data (PCHIP).
  static HermiteCubic monotone(std::vector<double> x, std::vector<double> y);
  // Three-point slopes, no limiting (for smooth non-monotone data).
  static HermiteCubic smooth(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;
  // Solves p(t) = v for monotone data with v inside the node range.
  double inverse(double v) const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double t) const;
  std::vector<double> x_, y_, d_;
};

}  // namespace edgelap
