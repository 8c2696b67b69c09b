#ifndef TREESHIFT_TESTS_TEST_SUPPORT_HPP
#define TREESHIFT_TESTS_TEST_SUPPORT_HPP

#include <utility>
#include <vector>

#include "treeshift/shift.hpp"

namespace treeshift::testing {

struct RandomTreeOpts {
  int depth = 6;
  int max_children = 3;
  std::size_t max_vertices = 4000;
};

// Random leafless truncation: every vertex above the horizon gets at least
// one child, extra children while the vertex budget allows. Ids are BFS.
inline DirectedTree random_tree(DetRng& rng, const RandomTreeOpts& opt = {}) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<VertexId> level{0};
  std::size_t count = 1;
  VertexId next = 1;
  for (int d = 0; d < opt.depth; ++d) {
    std::vector<VertexId> below;
    const std::size_t levels_left = static_cast<std::size_t>(opt.depth - d);
    for (std::size_t ui = 0; ui < level.size(); ++ui) {
      std::size_t kids = 1 + rng.next_below(static_cast<std::size_t>(opt.max_children));
      // Reserve a single chain down to the horizon for every vertex that
      // still needs one, so the minimum-fill completion always fits.
      const std::size_t reserved = (level.size() - ui - 1) * levels_left +
                                   below.size() * (levels_left - 1);
      while (kids > 1 &&
             count + kids * levels_left + reserved > opt.max_vertices) {
        --kids;
      }
      for (std::size_t i = 0; i < kids; ++i) {
        edges.emplace_back(level[ui], next);
        below.push_back(next);
        ++next;
        ++count;
      }
    }
    level = std::move(below);
  }
  TreeSpec spec;
  spec.kind = "explicit";
  spec.depth = opt.depth;
  spec.edges = std::move(edges);
  return build_explicit(spec, opt.max_vertices + 1);
}

struct RandomWeightOpts {
  bool normalized = false;      // positive lambda with unit child sums
  bool complex_lambda = false;  // ignored when normalized
  double beta_lo = 0.5;
  double beta_hi = 2.0;
  double lambda_lo = 0.2;
  double lambda_hi = 1.5;
};

inline WeightSystem random_weights(const DirectedTree& tree, DetRng& rng,
                                   const RandomWeightOpts& opt = {}) {
  const std::size_t n = tree.vertex_count();
  std::vector<double> beta(n, 1.0);
  for (VertexId v = 1; v < n; ++v) beta[v] = rng.next_in(opt.beta_lo, opt.beta_hi);

  std::vector<Complex> lambda(n, 1.0);
  if (opt.normalized) {
    std::vector<double> raw(n, 0.0);
    for (VertexId v = 1; v < n; ++v) raw[v] = rng.next_in(0.1, 1.0);
    for (VertexId u = 0; u < n; ++u) {
      KahanSum sum;
      for (VertexId c : tree.children(u)) sum.add(raw[c]);
      const double total = sum.value();
      for (VertexId c : tree.children(u)) lambda[c] = raw[c] / total;
    }
  } else {
    for (VertexId v = 1; v < n; ++v) {
      const double mag = rng.next_in(opt.lambda_lo, opt.lambda_hi);
      lambda[v] = opt.complex_lambda
                      ? std::polar(mag, rng.next_in(0.0, 6.283185307179586))
                      : Complex(mag, 0.0);
    }
  }
  return WeightSystem(tree, std::move(beta), std::move(lambda));
}

inline TreeVector random_support_vector(const DirectedTree& tree, DetRng& rng,
                                        std::size_t want, int max_depth) {
  TreeVector f;
  const std::size_t n = tree.vertex_count();
  for (std::size_t tries = 0; tries < 50 * want && f.support_size() < want; ++tries) {
    const VertexId v = static_cast<VertexId>(rng.next_below(n));
    if (tree.depth(v) <= max_depth) f.set(v, rng.next_complex_in_disc(1.0));
  }
  return f;
}

}  // namespace treeshift::testing

#endif
