#include <doctest.h>

#include "treeshift/errors.hpp"
#include "treeshift/tree.hpp"

using namespace treeshift;

TEST_CASE("kary tree has the documented BFS layout") {
  const DirectedTree t = build_kary(3, 3);
  CHECK(t.vertex_count() == 40);  // 1 + 3 + 9 + 27
  CHECK(t.horizon() == 3);
  CHECK(t.depth(0) == 0);
  CHECK(t.parent(0) == kNoVertex);

  const auto kids = t.children(0);
  REQUIRE(kids.size() == 3);
  CHECK(kids[0] == 1);
  CHECK(kids[2] == 3);
  CHECK(t.parent(4) == 1);  // first grandchild block hangs off vertex 1
  CHECK(t.depth(4) == 2);
  CHECK(t.depth_slice(2).size() == 9);
  CHECK(t.frontier().size() == 27);
  CHECK(t.is_frontier(39));
  CHECK(t.is_interior(12));
  CHECK(t.thinned_from() == std::nullopt);
}

TEST_CASE("t20 tree: two rays off the root with interleaved ids") {
  const DirectedTree t = build_t20(5);
  CHECK(t.vertex_count() == 11);
  // (i, j) -> 2j - 2 + i
  CHECK(t.parent(1) == 0);
  CHECK(t.parent(2) == 0);
  CHECK(t.parent(3) == 1);
  CHECK(t.parent(4) == 2);
  CHECK(t.depth(9) == 5);
  CHECK(t.child_count(0) == 2);
  CHECK(t.child_count(1) == 1);
  CHECK(t.branching_vertices() == std::vector<VertexId>{0});
}

TEST_CASE("ray is the one-child chain") {
  const DirectedTree t = build_ray(4);
  CHECK(t.vertex_count() == 5);
  for (VertexId v = 1; v < 5; ++v) CHECK(t.parent(v) == v - 1);
  CHECK(t.frontier().size() == 1);
}

TEST_CASE("ancestor walks the chain and rejects overshoot") {
  const DirectedTree t = build_kary(2, 4);
  const VertexId leaf = t.frontier()[0];
  CHECK(t.ancestor(leaf, 0) == leaf);
  CHECK(t.ancestor(leaf, 4) == 0);
  CHECK_THROWS_AS((void)t.ancestor(leaf, 5), AncestryError);
}

TEST_CASE("descendants_within reports cone truncation") {
  const DirectedTree t = build_kary(2, 3);
  const auto full = t.descendants_within(0, 3);
  CHECK(full.vertices.size() == 15);
  CHECK_FALSE(full.truncated);
  CHECK(full.vertices.front() == 0);  // BFS order, start included

  const auto deep = t.descendants_within(1, 3);  // only 2 levels stored below
  CHECK(deep.truncated);
  CHECK(deep.vertices.size() == 7);
}

TEST_CASE("enumerate_paths lists maximal paths in first-child order") {
  const DirectedTree t = build_kary(2, 3);
  const auto en = t.enumerate_paths(100);
  CHECK(en.complete);
  REQUIRE(en.paths.size() == 8);
  CHECK(en.paths[0] == std::vector<VertexId>{0, 1, 3, 7});
  CHECK(en.paths[7] == std::vector<VertexId>{0, 2, 6, 14});
  for (const auto& p : en.paths) {
    CHECK(p.size() == 4);
    CHECK(t.is_frontier(p.back()));
  }

  const auto capped = t.enumerate_paths(3);
  CHECK_FALSE(capped.complete);
  CHECK(capped.paths.size() == 3);
}

TEST_CASE("kary build respects the vertex budget") {
  CHECK_THROWS_AS((void)build_kary(4, 50), CapacityError);
  CHECK_THROWS_AS((void)build_kary(2, 10, 100), CapacityError);
}

TEST_CASE("thinned kary build reaches deep horizons and stays leafless") {
  const DirectedTree t = build_kary_thinned(4, 50, 1'000'000);
  REQUIRE(t.thinned_from().has_value());
  const int cap = *t.thinned_from();
  CHECK(cap == 7);
  CHECK(t.horizon() == 50);
  CHECK(t.vertex_count() <= 1'000'000);
  CHECK(t.frontier().size() == 16384);  // 4^7 chains reach the horizon
  for (VertexId v : t.depth_slice(cap + 3)) CHECK(t.child_count(v) == 1);
  // falls back to the full build when it fits
  const DirectedTree small = build_kary_thinned(2, 5, 1000);
  CHECK(small.thinned_from() == std::nullopt);
  CHECK(small.vertex_count() == 63);
}

TEST_CASE("explicit build validates the edge list") {
  TreeSpec ok;
  ok.kind = "explicit";
  ok.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 4}};
  const DirectedTree t = build_explicit(ok);
  CHECK(t.horizon() == 2);  // inferred
  CHECK(t.vertex_count() == 5);
  CHECK(t.depth(4) == 2);

  TreeSpec two_parents = ok;
  two_parents.edges.push_back({1, 4});
  CHECK_THROWS_AS((void)build_explicit(two_parents), TreeStructureError);

  TreeSpec unreachable = ok;
  unreachable.edges = {{0, 1}, {3, 4}, {4, 3}};
  CHECK_THROWS_AS((void)build_explicit(unreachable), TreeStructureError);

  TreeSpec leafy = ok;
  leafy.depth = 3;  // declared horizon deeper than any stored vertex
  CHECK_THROWS_AS((void)build_explicit(leafy), TreeStructureError);

  TreeSpec sparse;
  sparse.kind = "explicit";
  sparse.edges = {{0, 2}};  // id 1 missing
  CHECK_THROWS_AS((void)build_explicit(sparse), TreeStructureError);

  TreeSpec leaf_inside;  // vertex 2 stops above the inferred horizon
  leaf_inside.kind = "explicit";
  leaf_inside.edges = {{0, 1}, {0, 2}, {1, 3}};
  CHECK_THROWS_AS((void)build_explicit(leaf_inside), TreeStructureError);
}

TEST_CASE("serialization round trips and canonicalizes ids") {
  const DirectedTree t = build_t20(4);
  const TreeSpec spec = serialize_tree(t);
  CHECK(spec.kind == "explicit");
  CHECK(spec.depth == 4);
  CHECK(spec.edges.size() == t.vertex_count() - 1);
  const DirectedTree back = build_explicit(spec);
  CHECK(same_topology(t, back));
  CHECK_FALSE(same_topology(t, build_ray(4)));
  CHECK_FALSE(same_topology(t, build_t20(5)));
}
