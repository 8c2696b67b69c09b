#ifndef TREESHIFT_JSON_IO_HPP
#define TREESHIFT_JSON_IO_HPP

#include <memory>
#include <optional>
#include <string>

#include "treeshift/shift.hpp"
#include "treeshift/symbol.hpp"

namespace treeshift {

// A tree together with its weight system, loaded from a profile name or a
// JSON file. Heap placement keeps the weight system's back-reference to the
// tree stable when the bundle is moved around.
struct Model {
  std::unique_ptr<DirectedTree> tree;
  std::unique_ptr<WeightSystem> weights;
  std::string source;
  bool thinned = false;
};

struct ModelOptions {
  std::optional<int> depth;    // overrides the profile or file default
  bool allow_thinned = false;  // permit budget-capped kary builds
  std::size_t budget = DirectedTree::kDefaultVertexBudget;
};

// tree_arg is either a profile name ("t20", "ray", "kary:<k>") or a path to
// a tree JSON file:
//   {"kind": "kary", "kappa": 3, "depth": 8}
//   {"kind": "t20" | "ray", "depth": 60}
//   {"kind": "explicit", "depth": N, "edges": [[0,1], [0,2], ...],
//    "weights": {...}}                    (depth 0 or absent: inferred)
// weights_arg is empty (profile or embedded default) or a weights JSON path:
//   {"beta": <spec>, "lambda": <spec>}
// where <spec> is a number (constant) or an object
//   {"family": "const" | "kappa_pow" | "kappa_inv" | "t20" | "t20_mu"
//              | "sibling_uniform", ...parameters...,
//    "per_vertex": {"<id>": value}}      (value: number or [re, im])
// Default weights: kary profile 1/kappa with beta = kappa^-depth, t20 its
// named family, everything else unit weights. Format problems throw
// SpecFormatError.
Model load_model(const std::string& tree_arg, const std::string& weights_arg,
                 const ModelOptions& opt = {});

// arg is a JSON path ({"kind": "finite", "coeffs": [...]},
// {"kind": "geometric", "a": .., "ratio": ..}, {"kind": "indicator", "n": k}),
// or an inline form: "c0,c1,..." (finite, real coefficients),
// "geom:a,r", or "ind:n".
Symbol load_symbol(const std::string& arg);

// Canonical explicit-form JSON text of the tree (BFS relabelling).
std::string tree_to_json(const DirectedTree& tree);

}  // namespace treeshift

#endif
