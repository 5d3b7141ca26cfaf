#pragma once

#include <cstddef>
#include <vector>

namespace edgelap {

// Symmetric tridiagonal matrix: d = diagonal (size m), e = off-diagonal (size m-1).
struct SymTridiag {
  std::vector<double> d;
  std::vector<double> e;

  std::size_t size() const { return d.size(); }
  std::vector<double> apply(const std::vector<double>& x) const;
};

// Symmetric-definite pencil A x = lambda B x with A, B tridiagonal and B positive definite.
class TridiagPencil {
 public:
  TridiagPencil(SymTridiag a, SymTridiag b);

  std::size_t size() const { return a_.size(); }
  const SymTridiag& a() const { return a_; }
  const SymTridiag& b() const { return b_; }

  // Number of eigenvalues strictly below sigma (inertia of A - sigma B).
  std::size_t count_below(double sigma) const;

  // index-th eigenvalue (0-based) by bisection on the inertia count.
  double bisect(std::size_t index, double rel_tol = 1e-13) const;

  // Inverse iteration at shift sigma; result normalized so that x^T B x = 1.
  std::vector<double> inverse_iteration(double sigma, int iterations = 3) const;

  double b_inner(const std::vector<double>& x, const std::vector<double>& y) const;

 private:
  SymTridiag a_;
  SymTridiag b_;
};

// Solves T x = rhs for a general (nonsymmetric allowed) tridiagonal T using
// Gaussian elimination with partial pivoting. sub/diag/sup follow LAPACK gtsv layout.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs);

}  // namespace edgelap
