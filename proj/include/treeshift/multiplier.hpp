#ifndef TREESHIFT_MULTIPLIER_HPP
#define TREESHIFT_MULTIPLIER_HPP

#include <vector>

#include "treeshift/shift.hpp"
#include "treeshift/symbol.hpp"

namespace treeshift {

// Action of the multiplier attached to a coefficient sequence c:
//   (G f)(v) = sum_{k=0}^{depth(v)} lambda_{pa^k(v)|v} c(k) f(pa^k(v)).
// Each output value is a finite ancestor sum, so the result is exact on
// the stored truncation for any symbol shape.
TreeVector gamma_apply(const ShiftOperator& S, const Symbol& c, const TreeVector& f,
                       const ExecPolicy& exec = {});

// ||G_f(G_g h) - G_{f*g} h||_beta with both sides evaluated through
// independent code paths (two chained applications against one application
// of the Cauchy product). Requires positive edge weights. Throws
// TruncationError when the supports reach deep enough that the identity
// would need vertices past the horizon.
double multiplier_product_check(const ShiftOperator& S, const Symbol& f,
                                const Symbol& g, const TreeVector& h,
                                const ExecPolicy& exec = {});

// Margins norm_M - |c(k)| * ||S^k|| for k = 0..kmax; nonnegative margins
// certify the coefficient bound against the supplied multiplier norm
// estimate (usually the dense oracle's value on the same truncation).
std::vector<double> coefficient_bound_check(const ShiftOperator& S, const Symbol& c,
                                            double norm_M, int kmax,
                                            const ExecPolicy& exec = {});

struct NormUpperEstimate {
  double value = 0.0;        // refined-grid maximum
  double coarse = 0.0;       // first-pass maximum
  double rel_change = 0.0;   // (value - coarse) / max(value, tiny)
  int grid = 0;              // refined grid size
};
// Upper estimate sup |c(z)| over the circle |z| = norm_s, sampled on a
// uniform grid and once more on the doubled grid; the relative change is
// the published refinement diagnostic. Geometric symbols must satisfy
// |ratio| * norm_s < 1 (DivergentSeriesError otherwise).
NormUpperEstimate multiplier_norm_upper(const Symbol& c, double norm_s,
                                        int grid = 4096);

}  // namespace treeshift

#endif
