#ifndef TREESHIFT_SYMBOL_HPP
#define TREESHIFT_SYMBOL_HPP

#include <optional>
#include <vector>

#include "treeshift/numeric.hpp"

namespace treeshift {

// Coefficient sequence of a formal power series sum_k c(k) z^k. Three
// shapes cover everything the library needs: explicit finite coefficient
// lists, geometric tails a * r^k (with certified decay |r| < 1 where an
// evaluation requires it), and single-term indicators z^n.
class Symbol {
 public:
  enum class Kind { kFinite, kGeometric, kIndicator };

  static Symbol finite(std::vector<Complex> coeffs);
  static Symbol geometric(Complex a, Complex ratio);
  static Symbol indicator(int n);

  Kind kind() const { return kind_; }
  Complex coeff(int k) const;

  // Smallest bound with coeff(k) == 0 for all k > bound; empty for
  // geometric symbols with nonzero ratio.
  std::optional<int> support_bound() const;
  bool finitely_supported() const { return support_bound().has_value(); }

  // |ratio| for geometric symbols; empty otherwise.
  std::optional<double> decay_ratio() const;

  // Index cap for truncation-aware work: the support bound when finite,
  // otherwise the index where |coeff| falls below drop relative to the
  // leading coefficient. Always >= 0.
  int effective_degree(double drop = 1e-18) const;

  // Series value at z. Finite and indicator shapes evaluate exactly
  // (Horner / one power); geometric shapes require |ratio * z| < 1 and
  // use the closed form, throwing DivergentSeriesError otherwise.
  Complex eval(Complex z) const;

  // Largest |coeff(k)| for k <= through.
  double max_abs_coeff(int through) const;

 private:
  Kind kind_ = Kind::kFinite;
  std::vector<Complex> coeffs_;  // finite
  Complex a_ = 0.0, ratio_ = 0.0;  // geometric
  int n_ = 0;                      // indicator
};

// Cauchy product h(k) = sum_{j<=k} f(j) g(k-j); both factors must be
// finitely supported (support bounds add). Use cauchy_mult_truncated for
// a prefix of the product of arbitrary symbols.
Symbol cauchy_mult(const Symbol& f, const Symbol& g);
Symbol cauchy_mult_truncated(const Symbol& f, const Symbol& g, int order);

// Fejer-style average with weights (k+1-n)/(k+1) on coefficients
// n = 0..k, zero beyond; the classical summability smoothing of the first
// k+1 coefficients.
Symbol cesaro_symbol(const Symbol& f, int k);

// Coefficients through index n, the rest dropped. include_zero keeps the
// constant term (the default); the variant without it starts at index 1.
Symbol truncate_symbol(const Symbol& f, int n, bool include_zero = true);

}  // namespace treeshift

#endif
