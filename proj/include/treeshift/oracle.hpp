#ifndef TREESHIFT_ORACLE_HPP
#define TREESHIFT_ORACLE_HPP

#include <vector>

#include "treeshift/shift.hpp"
#include "treeshift/symbol.hpp"

namespace treeshift {

inline constexpr std::size_t kDenseBudget = 3000;

// Dense ground truth for cross-checking the structured formulas. The
// primary storage is the matrix in the orthonormalized basis (basis
// vectors scaled by sqrt(beta)), where the metric adjoint is the plain
// conjugate transpose; entries in the original basis are derived views.
class DenseOperator {
 public:
  DenseOperator(std::size_t n, std::vector<double> sqrt_beta);

  std::size_t size() const { return n_; }

  Complex ortho_entry(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col];
  }
  void set_ortho_entry(std::size_t row, std::size_t col, Complex v) {
    data_[row * n_ + col] = v;
  }
  // Same operator expressed on the unscaled basis vectors.
  Complex metric_entry(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col] * sqrt_beta_[col] / sqrt_beta_[row];
  }

  // y = A x and y = A* x on orthonormal-basis coordinates.
  std::vector<Complex> apply_ortho(const std::vector<Complex>& x) const;
  std::vector<Complex> apply_ortho_adjoint(const std::vector<Complex>& x) const;

  // Metric-adjoint action on a coefficient vector (original basis):
  // coordinates are rescaled, the orthonormal adjoint applied, and
  // rescaled back.
  std::vector<Complex> metric_adjoint_apply(const std::vector<Complex>& f) const;

  const std::vector<double>& sqrt_beta() const { return sqrt_beta_; }

 private:
  std::size_t n_;
  std::vector<double> sqrt_beta_;
  std::vector<Complex> data_;  // row-major orthonormal form
};

// Dense shift matrix; entry (v, parent(v)) = lambda_v sqrt(beta_v/beta_p)
// in the orthonormal form. Throws CapacityError past the budget.
DenseOperator materialize_shift(const ShiftOperator& S,
                                std::size_t budget = kDenseBudget);

// Dense k-th power, computed by k-1 honest matrix multiplications of the
// dense shift matrix (rows full of zeros are skipped, nothing else is
// assumed). restrict_columns_depth, when >= 0, zeroes the columns of base
// vertices deeper than the cap afterwards, which confines the operator to
// inputs whose k-step image is fully stored.
DenseOperator materialize_shift_power(const ShiftOperator& S, int k,
                                      std::size_t budget = kDenseBudget,
                                      int restrict_columns_depth = -1);

// Dense multiplier matrix by its entry formula: for every vertex v and
// ancestor u = pa^k(v), entry (v, u) = lambda_{u|v} c(k).
DenseOperator materialize_multiplier(const ShiftOperator& S, const Symbol& c,
                                     std::size_t budget = kDenseBudget);

struct OperatorNormResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // last relative step of the Ritz value
};
// Largest singular value: two-vector subspace iteration on A*A with a
// seeded deterministic start, Rayleigh-Ritz values, and a geometric-
// remainder extrapolation test at relative tolerance rel_tol. Throws
// ConvergenceError at the iteration cap. The matrix is scanned once into
// sparse row form, so big mostly-zero matrices iterate quickly.
OperatorNormResult operator_norm(const DenseOperator& A, double rel_tol = 1e-10,
                                 int max_iter = 100000);

}  // namespace treeshift

#endif
