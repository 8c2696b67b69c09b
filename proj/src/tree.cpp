#include "treeshift/tree.hpp"

#include <algorithm>
#include <utility>

#include "treeshift/errors.hpp"

namespace treeshift {

namespace {

std::size_t kary_full_count(int kappa, int depth) {
  // sum_{k=0..depth} kappa^k, saturating instead of overflowing
  std::size_t total = 0, level = 1;
  for (int k = 0; k <= depth; ++k) {
    if (total > std::size_t(-1) - level) return std::size_t(-1);
    total += level;
    if (k < depth) {
      if (kappa != 0 && level > std::size_t(-1) / std::size_t(kappa))
        return std::size_t(-1);
      level *= std::size_t(kappa);
    }
  }
  return total;
}

}  // namespace

VertexId DirectedTree::ancestor(VertexId v, int k) const {
  if (k < 0 || k > depth_[v])
    throw AncestryError("ancestor: level " + std::to_string(k) +
                        " exceeds depth of vertex " + std::to_string(v));
  while (k-- > 0) v = parent_[v];
  return v;
}

DirectedTree::DescendantSet DirectedTree::descendants_within(VertexId u, int n) const {
  DescendantSet out;
  out.vertices.push_back(u);
  std::size_t scan = 0;
  const int limit = depth_[u] + n;
  while (scan < out.vertices.size()) {
    VertexId v = out.vertices[scan++];
    if (depth_[v] == limit) continue;
    if (is_frontier(v)) {
      // children exist in the modelled tree but are not stored
      out.truncated = true;
      continue;
    }
    for (VertexId c : children(v)) out.vertices.push_back(c);
  }
  return out;
}

DirectedTree::PathEnumeration DirectedTree::enumerate_paths(std::size_t budget) const {
  PathEnumeration out;
  if (budget == 0) {
    out.complete = frontier().empty();
    return out;
  }
  // iterative DFS tracking the current root path; children in stored order
  std::vector<VertexId> path{0};
  std::vector<std::size_t> next_child{0};
  while (!path.empty()) {
    VertexId v = path.back();
    if (is_frontier(v)) {
      if (out.paths.size() == budget) {
        out.complete = false;
        return out;
      }
      out.paths.push_back(path);
      path.pop_back();
      next_child.pop_back();
      continue;
    }
    auto kids = children(v);
    if (next_child.back() == kids.size()) {
      path.pop_back();
      next_child.pop_back();
      continue;
    }
    VertexId c = kids[next_child.back()++];
    path.push_back(c);
    next_child.push_back(0);
  }
  return out;
}

std::vector<VertexId> DirectedTree::branching_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (child_count(v) >= 2) out.push_back(v);
  return out;
}

namespace detail {

DirectedTree make_tree(std::vector<VertexId> parent, std::vector<std::int32_t> depth,
                       std::span<const std::pair<VertexId, VertexId>> edges,
                       int horizon, std::optional<int> thinned_from) {
  DirectedTree t;
  const std::size_t n = parent.size();
  t.parent_ = std::move(parent);
  t.depth_ = std::move(depth);
  t.horizon_ = horizon;
  t.thinned_from_ = thinned_from;

  t.child_off_.assign(n + 1, 0);
  for (auto& [p, c] : edges) t.child_off_[p + 1]++;
  for (std::size_t i = 1; i <= n; ++i) t.child_off_[i] += t.child_off_[i - 1];
  t.child_ids_.resize(edges.size());
  {
    std::vector<std::size_t> cursor(t.child_off_.begin(), t.child_off_.end() - 1);
    for (auto& [p, c] : edges) t.child_ids_[cursor[p]++] = c;
  }

  t.slice_off_.assign(std::size_t(horizon) + 2, 0);
  for (std::size_t v = 0; v < n; ++v) t.slice_off_[std::size_t(t.depth_[v]) + 1]++;
  for (std::size_t d = 1; d < t.slice_off_.size(); ++d)
    t.slice_off_[d] += t.slice_off_[d - 1];
  t.slice_ids_.resize(n);
  {
    std::vector<std::size_t> cursor(t.slice_off_.begin(), t.slice_off_.end() - 1);
    for (std::size_t v = 0; v < n; ++v)
      t.slice_ids_[cursor[std::size_t(t.depth_[v])]++] = VertexId(v);
  }
  return t;
}

}  // namespace detail

using detail::make_tree;

DirectedTree build_kary(int kappa, int depth, std::size_t budget) {
  if (kappa < 1) throw SpecFormatError("build_kary: kappa must be >= 1");
  if (depth < 1) throw SpecFormatError("build_kary: depth must be >= 1");
  std::size_t n = kary_full_count(kappa, depth);
  if (n > budget)
    throw CapacityError("build_kary: kappa=" + std::to_string(kappa) + " depth=" +
                        std::to_string(depth) + " needs " +
                        (n == std::size_t(-1) ? std::string("too many")
                                              : std::to_string(n)) +
                        " vertices, budget is " + std::to_string(budget));

  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::int32_t> dep(n, 0);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  std::size_t level_start = 0, level_size = 1;
  for (int d = 0; d < depth; ++d) {
    std::size_t next_start = level_start + level_size;
    for (std::size_t i = 0; i < level_size; ++i) {
      VertexId u = VertexId(level_start + i);
      for (int j = 0; j < kappa; ++j) {
        VertexId c = VertexId(next_start + i * std::size_t(kappa) + std::size_t(j));
        parent[c] = u;
        dep[c] = d + 1;
        edges.emplace_back(u, c);
      }
    }
    level_start = next_start;
    level_size *= std::size_t(kappa);
  }
  return make_tree(std::move(parent), std::move(dep), edges, depth, std::nullopt);
}

DirectedTree build_kary_thinned(int kappa, int depth, std::size_t budget) {
  if (kappa < 1) throw SpecFormatError("build_kary_thinned: kappa must be >= 1");
  if (depth < 1) throw SpecFormatError("build_kary_thinned: depth must be >= 1");
  if (kary_full_count(kappa, depth) <= budget) return build_kary(kappa, depth, budget);

  // Largest cap d with full levels to d plus one chain per depth-d vertex
  // down to the horizon still inside budget.
  int cap = -1;
  std::size_t best_total = 0;
  std::size_t full = 1, level = 1;  // full = vertices to depth d, level = kappa^d
  for (int d = 0; d < depth; ++d) {
    std::size_t chains = level;
    std::size_t tail = chains * std::size_t(depth - d);
    std::size_t total = full + tail;
    if (total <= budget) {
      cap = d;
      best_total = total;
    }
    if (level > budget) break;  // deeper caps only grow
    level *= std::size_t(kappa);
    full += level;
  }
  if (cap < 0)
    throw CapacityError("build_kary_thinned: even a single-chain tail exceeds budget " +
                        std::to_string(budget));

  const std::size_t n = best_total;
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::int32_t> dep(n, 0);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  std::vector<VertexId> current{0};
  std::size_t next_id = 1;
  for (int d = 0; d < depth; ++d) {
    std::vector<VertexId> next;
    const int fanout = d < cap ? kappa : 1;
    next.reserve(current.size() * std::size_t(fanout));
    for (VertexId u : current) {
      for (int j = 0; j < fanout; ++j) {
        VertexId c = VertexId(next_id++);
        parent[c] = u;
        dep[c] = d + 1;
        edges.emplace_back(u, c);
        next.push_back(c);
      }
    }
    current = std::move(next);
  }
  return make_tree(std::move(parent), std::move(dep), edges, depth, cap);
}

DirectedTree build_t20(int depth, std::size_t budget) {
  if (depth < 1) throw SpecFormatError("build_t20: depth must be >= 1");
  std::size_t n = 2 * std::size_t(depth) + 1;
  if (n > budget) throw CapacityError("build_t20: budget exceeded");
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::int32_t> dep(n, 0);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  // (i, j) -> id 2j - 2 + i, branches i = 1, 2
  for (int j = 1; j <= depth; ++j) {
    for (int i = 1; i <= 2; ++i) {
      VertexId v = VertexId(2 * j - 2 + i);
      VertexId p = j == 1 ? 0 : VertexId(2 * (j - 1) - 2 + i);
      parent[v] = p;
      dep[v] = j;
      edges.emplace_back(p, v);
    }
  }
  // Root edges first and in branch order, then depth by depth, which is
  // exactly the id order; keep edges sorted by child id for BFS layout.
  std::sort(edges.begin(), edges.end(),
            [](auto& a, auto& b) { return a.second < b.second; });
  return make_tree(std::move(parent), std::move(dep), edges, depth, std::nullopt);
}

DirectedTree build_ray(int depth, std::size_t budget) {
  return build_kary(1, depth, budget);
}

DirectedTree build_explicit(const TreeSpec& spec, std::size_t budget) {
  const auto& edges = spec.edges;
  if (edges.empty()) throw TreeStructureError("explicit tree: no edges");

  std::size_t n = 1;
  for (auto& [p, c] : edges) {
    n = std::max<std::size_t>(n, std::size_t(p) + 1);
    n = std::max<std::size_t>(n, std::size_t(c) + 1);
  }
  if (n > budget)
    throw CapacityError("explicit tree: " + std::to_string(n) +
                        " vertices, budget is " + std::to_string(budget));

  std::vector<VertexId> parent(n, kNoVertex);
  for (auto& [p, c] : edges) {
    if (c == 0) throw TreeStructureError("explicit tree: root listed as a child");
    if (parent[c] != kNoVertex)
      throw TreeStructureError("explicit tree: vertex " + std::to_string(c) +
                               " has multiple parents");
    parent[c] = p;
  }

  // Cycle check: walk the parent chain from every vertex with a stamp.
  // A repeat of the current stamp before reaching the root is a cycle.
  std::vector<std::uint32_t> mark(n, 0);
  for (VertexId start = 0; start < n; ++start) {
    VertexId v = start;
    const std::uint32_t stamp = start + 1;
    while (v != 0) {
      if (parent[v] == kNoVertex)
        throw TreeStructureError("explicit tree: vertex " + std::to_string(v) +
                                 " is not connected to the root");
      if (mark[v] == stamp)
        throw TreeStructureError("explicit tree: cycle through vertex " +
                                 std::to_string(v));
      if (mark[v] != 0) break;  // chain already cleared via an earlier start
      mark[v] = stamp;
      v = parent[v];
    }
  }

  std::vector<std::int32_t> dep(n, -1);
  dep[0] = 0;
  // depths via chain walks; each vertex resolved once
  for (VertexId start = 0; start < n; ++start) {
    if (dep[start] >= 0) continue;
    std::vector<VertexId> chain;
    VertexId v = start;
    while (dep[v] < 0) {
      chain.push_back(v);
      v = parent[v];
    }
    std::int32_t d = dep[v];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) dep[*it] = ++d;
  }

  int max_depth = 0;
  for (std::size_t v = 0; v < n; ++v) max_depth = std::max(max_depth, int(dep[v]));
  int horizon = spec.depth > 0 ? spec.depth : max_depth;
  if (max_depth > horizon)
    throw TreeStructureError("explicit tree: vertex deeper than the declared horizon");
  if (max_depth < horizon)
    throw TreeStructureError("explicit tree: declared horizon " +
                             std::to_string(horizon) + " but deepest vertex is at " +
                             std::to_string(max_depth));

  std::vector<char> has_child(n, 0);
  for (auto& [p, c] : edges) has_child[p] = 1;
  for (std::size_t v = 0; v < n; ++v)
    if (dep[v] < horizon && !has_child[v])
      throw TreeStructureError("explicit tree: vertex " + std::to_string(v) +
                               " at depth " + std::to_string(dep[v]) +
                               " has no children above the horizon");

  return make_tree(std::move(parent), std::move(dep), edges, horizon, std::nullopt);
}

namespace {

// BFS relabelling that follows stored child order.
std::vector<VertexId> bfs_order(const DirectedTree& t) {
  std::vector<VertexId> order;
  order.reserve(t.vertex_count());
  order.push_back(0);
  for (std::size_t scan = 0; scan < order.size(); ++scan)
    for (VertexId c : t.children(order[scan])) order.push_back(c);
  return order;
}

}  // namespace

TreeSpec serialize_tree(const DirectedTree& tree) {
  TreeSpec spec;
  spec.kind = "explicit";
  spec.depth = tree.horizon();
  auto order = bfs_order(tree);
  std::vector<VertexId> new_id(tree.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = VertexId(i);
  spec.edges.reserve(tree.vertex_count() - 1);
  for (std::size_t i = 1; i < order.size(); ++i) {
    VertexId v = order[i];
    spec.edges.emplace_back(new_id[tree.parent(v)], VertexId(i));
  }
  return spec;
}

bool same_topology(const DirectedTree& a, const DirectedTree& b) {
  if (a.vertex_count() != b.vertex_count() || a.horizon() != b.horizon()) return false;
  auto ea = serialize_tree(a).edges;
  auto eb = serialize_tree(b).edges;
  return ea == eb;
}

}  // namespace treeshift
