#ifndef TREESHIFT_TREE_HPP
#define TREESHIFT_TREE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treeshift {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

class DirectedTree;

namespace detail {
// Assembles a tree from validated parent/depth arrays; the edge order fixes
// each parent's child order. Builders funnel through here.
DirectedTree make_tree(std::vector<VertexId> parent, std::vector<std::int32_t> depth,
                       std::span<const std::pair<VertexId, VertexId>> edges,
                       int horizon, std::optional<int> thinned_from);
}  // namespace detail

// Depth-N truncation of a rooted, leafless directed tree.
//
// Vertices are dense ids 0..n-1 with the root at 0. Every vertex strictly
// above the horizon keeps at least one stored child, so the stored object
// is always the restriction of an infinite leafless tree to depths <= N.
// The depth-N slice is the frontier: its children exist in the modelled
// tree but are not stored, and operations that would need them say so.
//
// Children keep their insertion order and all traversals follow it, which
// makes every downstream computation deterministic.
class DirectedTree {
 public:
  static constexpr std::size_t kDefaultVertexBudget = 5'000'000;

  std::size_t vertex_count() const { return parent_.size(); }
  int horizon() const { return horizon_; }

  VertexId parent(VertexId v) const { return parent_[v]; }
  int depth(VertexId v) const { return depth_[v]; }

  std::span<const VertexId> children(VertexId v) const {
    return {child_ids_.data() + child_off_[v], child_off_[v + 1] - child_off_[v]};
  }
  std::size_t child_count(VertexId v) const {
    return child_off_[v + 1] - child_off_[v];
  }

  // Vertices of one depth slice, in id order (BFS order for built trees).
  std::span<const VertexId> depth_slice(int d) const {
    return {slice_ids_.data() + slice_off_[d], slice_off_[d + 1] - slice_off_[d]};
  }
  std::span<const VertexId> frontier() const { return depth_slice(horizon_); }

  bool is_frontier(VertexId v) const { return depth_[v] == horizon_; }
  bool is_interior(VertexId v) const { return depth_[v] < horizon_; }

  // pa^k(v); throws AncestryError if k exceeds depth(v).
  VertexId ancestor(VertexId v, int k) const;

  // Depth below which a budget-capped build stored all children, if the
  // build thinned the tail to single-child chains (see build_kary_thinned).
  std::optional<int> thinned_from() const { return thinned_from_; }

  struct DescendantSet {
    std::vector<VertexId> vertices;  // BFS order, includes the start vertex
    bool truncated = false;          // cone ran past the stored horizon
  };
  // Des<n>(u): u together with its stored descendants within n generations.
  DescendantSet descendants_within(VertexId u, int n) const;

  struct PathEnumeration {
    std::vector<std::vector<VertexId>> paths;  // each root..frontier
    bool complete = true;                      // false if budget cut it off
  };
  // Maximal stored paths in first-child DFS order, at most budget of them.
  PathEnumeration enumerate_paths(std::size_t budget) const;

  // Vertices with two or more stored children, in id order.
  std::vector<VertexId> branching_vertices() const;

 private:
  std::vector<VertexId> parent_;
  std::vector<std::int32_t> depth_;
  std::vector<std::size_t> child_off_;
  std::vector<VertexId> child_ids_;
  std::vector<std::size_t> slice_off_;
  std::vector<VertexId> slice_ids_;
  int horizon_ = 0;
  std::optional<int> thinned_from_;

  friend DirectedTree detail::make_tree(std::vector<VertexId>,
                                        std::vector<std::int32_t>,
                                        std::span<const std::pair<VertexId, VertexId>>,
                                        int, std::optional<int>);
};

// Parsed form of a tree description; see json_io for the file format.
struct TreeSpec {
  std::string kind;  // "kary" | "t20" | "explicit"
  int kappa = 0;     // kary only
  int depth = 0;     // horizon; 0 means "infer from edges" for explicit
  std::vector<std::pair<VertexId, VertexId>> edges;  // explicit only
};

// Full kappa-ary tree to the given horizon. Vertex (k,l) gets the BFS id
// (kappa^k - 1)/(kappa - 1) + l - 1, children of (k,l) are
// (k+1, kappa*(l-1)+1 .. kappa*l). Throws CapacityError past the budget.
DirectedTree build_kary(int kappa, int depth,
                        std::size_t budget = DirectedTree::kDefaultVertexBudget);

// Budget-capped variant for deep horizons: all children are stored down to
// the largest depth the budget allows, and below that each vertex continues
// with its first child only, so the tree still reaches the horizon and every
// frontier vertex still determines a root-to-horizon path. thinned_from()
// reports the cap depth. Falls back to the full build when it fits.
DirectedTree build_kary_thinned(int kappa, int depth,
                                std::size_t budget = DirectedTree::kDefaultVertexBudget);

// Root with two rays: vertices (1,j) and (2,j), j = 1..depth, ids
// (i,j) -> 2j - 2 + i. Both rays hang off the root.
DirectedTree build_t20(int depth,
                       std::size_t budget = DirectedTree::kDefaultVertexBudget);

// Single ray 0 -> 1 -> ... -> depth.
DirectedTree build_ray(int depth,
                       std::size_t budget = DirectedTree::kDefaultVertexBudget);

// Builds from an explicit edge list. Ids must be dense 0..n-1 with root 0.
// Rejects repeated parents, cycles, unreachable vertices, and childless
// vertices strictly above the horizon. If spec.depth is 0 the horizon is
// the deepest vertex present.
DirectedTree build_explicit(const TreeSpec& spec,
                            std::size_t budget = DirectedTree::kDefaultVertexBudget);

// Canonical explicit form: edges (parent(v), v) after relabelling vertices
// in BFS order (children in stored order). Two trees that differ only by
// vertex names serialize identically.
TreeSpec serialize_tree(const DirectedTree& tree);

// Ordered-topology equality after canonical BFS relabelling.
bool same_topology(const DirectedTree& a, const DirectedTree& b);

}  // namespace treeshift

#endif
