#ifndef TREESHIFT_WEIGHTS_HPP
#define TREESHIFT_WEIGHTS_HPP

#include <complex>
#include <span>
#include <vector>

#include "treeshift/numeric.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

// Edge weights lambda (one per non-root vertex, attached to the edge from
// its parent) together with the inner-product weights beta (one per vertex,
// strictly positive). Ancestor chain products from the root are cached at
// construction, both as complex values and as log-magnitudes; the latter
// keep very deep chains out of the underflow range.
class WeightSystem {
 public:
  WeightSystem(const DirectedTree& tree, std::vector<double> beta,
               std::vector<Complex> lambda);

  const DirectedTree& tree() const { return *tree_; }

  double beta(VertexId v) const { return beta_[v]; }
  Complex lambda(VertexId v) const { return lambda_[v]; }

  // lambda_{root|v}, the product along the whole chain above v.
  Complex root_product(VertexId v) const { return root_prod_[v]; }
  // log |lambda_{root|v}|; -inf when a zero weight sits on the chain.
  double log_abs_root_product(VertexId v) const { return log_root_prod_[v]; }

  // Product of lambda over the chain from the child of u down to v; 1 when
  // u == v. Throws AncestryError when u is not an ancestor of v. Computed
  // by an exact walk, not by dividing cached prefixes.
  Complex lambda_product(VertexId u, VertexId v) const;

  // True when every lambda is real and strictly positive.
  bool lambdas_positive() const { return lambdas_positive_; }

  // Interior vertices whose stored child weights do not sum to 1 within
  // tol, plus (when positivity fails) the offending child vertices.
  struct NormalizationReport {
    std::vector<VertexId> bad_parents;     // child sums off by more than tol
    std::vector<VertexId> nonpositive;     // lambda not a positive real
    bool ok() const { return bad_parents.empty() && nonpositive.empty(); }
  };
  NormalizationReport check_normalized(double tol = 1e-9) const;
  bool is_normalized(double tol = 1e-9) const { return check_normalized(tol).ok(); }

  // Throws unless every lambda is a strictly positive real.
  void require_positive(const char* what) const;
  // Throws unless positive and unit child sums hold within tol.
  void require_normalized(double tol, const char* what) const;

 private:
  const DirectedTree* tree_;
  std::vector<double> beta_;
  std::vector<Complex> lambda_;      // index 0 unused, kept as 1
  std::vector<Complex> root_prod_;   // lambda_{root|v}
  std::vector<double> log_root_prod_;
  bool lambdas_positive_ = true;
};

// Child-sum renormalization of a nonzero weight family mu:
//   lambda[v] = |mu_v|^2 / (sum of |mu_u|^2 over the siblings of v),
//   beta[v]   = (product over the chain of those sibling sums)^2
//               / |product of mu over the chain|^2.
// The output passes check_normalized exactly (up to rounding) and carries a
// shift unitarily equivalent to the one mu defines on unweighted space.
struct NormalizedWeights {
  std::vector<double> lambda;  // positive, index 0 unused
  std::vector<double> beta;
};
NormalizedWeights normalize_mu(const DirectedTree& tree, std::span<const Complex> mu);

// mu_v = sqrt(beta_v / beta_parent) * lambda_v: the weight family of the
// same shift moved onto unweighted (beta = 1) space.
std::vector<Complex> weights_to_ones(const WeightSystem& w);

// Given one shift as mu on unweighted space and a target weight family
// lambda (all nonzero), produces the beta making the two unitarily
// equivalent plus the diagonal of the intertwining unitary:
//   beta_v = |mu_{root|v} / lambda_{root|v}|^2,
//   diag_v = lambda_{root|v} / mu_{root|v}   ((Uf)(v) = diag_v f(v)).
struct ConjugationFactors {
  std::vector<double> beta;
  std::vector<Complex> diag;
};
ConjugationFactors unitary_conjugation_factors(const DirectedTree& tree,
                                               std::span<const Complex> mu,
                                               std::span<const Complex> lambda);

// Convenience families used by the built-in profiles.
WeightSystem make_kary_weights(const DirectedTree& tree, int kappa);
WeightSystem make_t20_weights(const DirectedTree& tree);
WeightSystem make_t20_mu_on_ones(const DirectedTree& tree);
WeightSystem make_unit_weights(const DirectedTree& tree);  // lambda = beta = 1

}  // namespace treeshift

#endif
