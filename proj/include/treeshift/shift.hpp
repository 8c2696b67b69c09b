#ifndef TREESHIFT_SHIFT_HPP
#define TREESHIFT_SHIFT_HPP

#include <vector>

#include "treeshift/tree_vector.hpp"

namespace treeshift {

// The weighted shift on a weighted tree truncation:
//   (S f)(v) = lambda_v * f(parent(v)) for v != root, (S f)(root) = 0,
// together with its adjoint in the beta inner product and the norm
// machinery built from per-vertex descendant-cone sums.
class ShiftOperator {
 public:
  ShiftOperator(const DirectedTree& tree, const WeightSystem& weights);

  const DirectedTree& tree() const { return *tree_; }
  const WeightSystem& weights() const { return *weights_; }

  struct VectorResult {
    TreeVector value;
    // Set when the stored horizon clipped information: for the forward
    // shift, support sat on the frontier so mass left the stored range;
    // for the adjoint, support touched the two deepest slices, where a
    // vector standing for an infinite-tree restriction may be missing
    // below-horizon data.
    bool truncation_flagged = false;
  };

  VectorResult apply(const TreeVector& f) const;
  VectorResult apply_adjoint(const TreeVector& f) const;

  struct PowerNorm {
    double norm = 0.0;       // ||S^k|| over the stored truncation
    double sup_sq = 0.0;     // the defining supremum (squared norm)
    VertexId argmax = kNoVertex;
    int stabilized_depth = 0;  // depth where the running sup last improved
    int scan_limit = 0;        // deepest base depth with a full k-cone
  };
  // sup over vertices u with a fully stored k-generation cone of
  //   sum_{v in generation k below u} |lambda_{u|v}|^2 beta_v / beta_u.
  // Scans in BFS order; ties keep the earliest vertex. Throws HorizonError
  // when k exceeds the horizon.
  PowerNorm power_norm(int k, const ExecPolicy& exec = {}) const;

  struct BoundednessReport {
    double sup_sq = 0.0;             // power_norm(1) supremum
    std::vector<double> slice_max;   // per-depth max child sum, depths 0..N-1
    bool increasing_trend = false;   // strictly increasing slice maxima
  };
  BoundednessReport boundedness_margin(const ExecPolicy& exec = {}) const;

  struct GelfandEstimate {
    std::vector<double> seq;  // ||S^k||^(1/k), k = 1..kmax
    double estimate = 0.0;    // last term
    bool nonincreasing = true;
  };
  GelfandEstimate spectral_radius_estimate(int kmax, const ExecPolicy& exec = {}) const;

 private:
  const DirectedTree* tree_;
  const WeightSystem* weights_;
};

}  // namespace treeshift

#endif
