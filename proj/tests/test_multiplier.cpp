#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/multiplier.hpp"

using namespace treeshift;

TEST_CASE("indicator symbols reproduce shift powers") {
  DetRng rng(55);
  const DirectedTree t =
      testing::random_tree(rng, {.depth = 6, .max_children = 3, .max_vertices = 500});
  const WeightSystem w = testing::random_weights(t, rng, {.complex_lambda = true});
  const ShiftOperator S(t, w);
  const TreeVector f = testing::random_support_vector(t, rng, 20, 2);

  TreeVector powered = f;
  for (int k = 1; k <= 3; ++k) {
    powered = S.apply(powered).value;
    const TreeVector via_symbol = gamma_apply(S, Symbol::indicator(k), f);
    CHECK(sup_distance(powered, via_symbol) <= 1e-14);
  }
}

TEST_CASE("the action sums weighted ancestors against coefficients") {
  // On the unit ray with symbol sum_k 2^-k z^k, moving e_0 through the
  // multiplier puts 2^-k on the vertex at depth k.
  const DirectedTree t = build_ray(12);
  const WeightSystem w = make_unit_weights(t);
  const ShiftOperator S(t, w);
  TreeVector e0;
  e0.set(0, 1.0);
  const TreeVector g = gamma_apply(S, Symbol::geometric(1.0, 0.5), e0);
  CHECK(g.support_size() == 13);
  CHECK(g.at(0) == Complex(1.0));
  CHECK(g.at(5) == Complex(0.03125));
  CHECK(g.at(12) == Complex(std::pow(0.5, 12)));
}

TEST_CASE("gamma action is linear in the argument") {
  DetRng rng(81);
  const DirectedTree t =
      testing::random_tree(rng, {.depth = 5, .max_children = 3, .max_vertices = 300});
  const WeightSystem w = testing::random_weights(t, rng, {.complex_lambda = true});
  const ShiftOperator S(t, w);
  const Symbol c = Symbol::finite({1.0, Complex(0.0, 0.5), -0.25});

  const TreeVector f = testing::random_support_vector(t, rng, 12, 2);
  const TreeVector g = testing::random_support_vector(t, rng, 12, 2);
  TreeVector fg = f;
  fg += g;
  TreeVector sum = gamma_apply(S, c, f);
  sum += gamma_apply(S, c, g);
  CHECK(sup_distance(gamma_apply(S, c, fg), sum) <= 1e-13);
}

TEST_CASE("product of multipliers is the multiplier of the Cauchy product") {
  DetRng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const DirectedTree t =
        testing::random_tree(rng, {.depth = 7, .max_children = 3, .max_vertices = 800});
    const WeightSystem w = testing::random_weights(t, rng, {.normalized = true});
    const ShiftOperator S(t, w);
    const Symbol f = Symbol::finite({1.0, rng.next_in(-1.0, 1.0), rng.next_in(-0.5, 0.5)});
    const Symbol g = Symbol::finite({rng.next_in(0.5, 1.0), rng.next_in(-1.0, 1.0)});
    TreeVector h;
    h.set(0, rng.next_complex_in_disc(1.0));
    for (VertexId c : t.children(0)) h.set(c, rng.next_complex_in_disc(1.0));
    CHECK(multiplier_product_check(S, f, g, h) <= 1e-11);
  }
}

TEST_CASE("product check requires room below the support") {
  const DirectedTree t = build_ray(4);
  const WeightSystem w = make_unit_weights(t);
  const ShiftOperator S(t, w);
  const Symbol f = Symbol::finite({1.0, 1.0, 1.0});  // degree 2
  const Symbol g = Symbol::finite({1.0, 1.0});       // degree 1
  TreeVector h;
  h.set(2, 1.0);  // depth 2 + total degree 3 > horizon 4
  CHECK_THROWS_AS((void)multiplier_product_check(S, f, g, h), TruncationError);
}

TEST_CASE("coefficient bounds against power norms") {
  const DirectedTree t = build_t20(40);
  const WeightSystem w = make_t20_weights(t);
  const ShiftOperator S(t, w);
  const Symbol c = Symbol::geometric(1.0, 0.5);
  // ||S^k|| = 1, so margins are norm_M - 2^-k
  const auto margins = coefficient_bound_check(S, c, 1.5, 6);
  REQUIRE(margins.size() == 7);
  CHECK(margins[0] == 0.5);
  CHECK(margins[1] == 1.0);
  CHECK(margins[6] == doctest::Approx(1.5 - std::pow(0.5, 6)).epsilon(1e-14));
}

TEST_CASE("boundary grid bounds the multiplier norm from above") {
  const Symbol c = Symbol::geometric(1.0, 0.5);
  const auto up = multiplier_norm_upper(c, 1.0, 512);
  CHECK(up.value == 2.0);  // the max of |1/(1 - z/2)| on |z| = 1 sits at z = 1
  CHECK(up.coarse == 2.0);
  CHECK(up.grid == 1024);
  CHECK(up.rel_change == 0.0);

  const Symbol p = Symbol::finite({0.0, 1.0});  // the shift itself
  CHECK(multiplier_norm_upper(p, 0.5, 256).value == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS((void)multiplier_norm_upper(Symbol::geometric(1.0, 1.0), 1.0, 64),
                  DivergentSeriesError);
}
