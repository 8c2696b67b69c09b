// End-to-end checks against hand-derived values and the dense oracle, with
// wall-clock limits on the two scanning criteria. One line per criterion;
// the process exits nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "treeshift/analysis.hpp"
#include "treeshift/errors.hpp"

using namespace treeshift;
using testing::random_support_vector;
using testing::random_tree;
using testing::random_weights;

namespace {

struct Outcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<Outcome> results;

void record(const std::string& name, bool passed, const std::string& detail) {
  results.push_back({name, passed, detail});
  std::printf("[%s] %-40s %s\n", passed ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Evaluation-disc radius of the deep two-branch tree, under a second.
void c1_evaluation_disc() {
  const auto t0 = std::chrono::steady_clock::now();
  const DirectedTree t = build_t20(60);
  const WeightSystem w = make_t20_weights(t);
  const ShiftOperator S(t, w);
  const BpeProfile p = bpe_profile(S);
  const double elapsed = seconds_since(t0);
  const double err = std::abs(p.radius - 0.5);
  const bool ok = err < 1e-9 && p.window_spread_rel < 1e-9 && elapsed < 1.0;
  record("evaluation-disc-two-branch", ok,
         fmt("radius_err=%.2e spread=%.2e time=%.3fs", err, p.window_spread_rel,
             elapsed));
}

// 2. Path-radius estimates on budget-thinned deep regular trees.
void c2_deep_path_radius() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int kappa : {2, 3, 4}) {
    const DirectedTree t = build_kary_thinned(kappa, 50, 1'000'000);
    const WeightSystem w = make_kary_weights(t, kappa);
    const ShiftOperator S(t, w);
    const R2PlusEstimate est = r2_plus(S);
    worst = std::max(worst, std::abs(est.estimate - std::pow(kappa, -1.5)));
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst <= 1e-12 && elapsed < 5.0;
  record("deep-path-radius-regular", ok,
         fmt("max_err=%.2e time=%.3fs", worst, elapsed));
}

// 3. Kernels as adjoint eigenvectors across a grid inside the disc.
void c3_kernel_eigenvectors() {
  const DirectedTree t = build_kary(3, 10);
  const WeightSystem w = make_kary_weights(t, 3);
  const ShiftOperator S(t, w);
  double worst = 0.0;
  for (double rho : {0.0, 0.3, 0.6, 0.9}) {
    for (int a = 0; a < 8; ++a) {
      const Complex z = std::polar(rho, 0.25 * 3.14159265358979323846 * a);
      worst = std::max(
          worst, adjoint_eigen_residual(S, std::conj(z) / 3.0, t.horizon() - 1));
      if (rho == 0.0) break;
    }
  }
  const bool ok = worst <= 1e-10;
  record("kernel-adjoint-eigenvectors", ok, fmt("max_residual=%.2e", worst));
}

// 4. Power-norm scan against the dense oracle on random trees.
void c4_power_norm_vs_dense() {
  DetRng rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int depth = 5 + int(rng.next_below(4));
    const DirectedTree t = random_tree(
        rng, {.depth = depth, .max_children = 4, .max_vertices = 2000});
    const WeightSystem w =
        random_weights(t, rng, {.complex_lambda = trial % 2 == 0});
    const ShiftOperator S(t, w);
    for (int k = 1; k <= 3; ++k) {
      const double formula = S.power_norm(k).norm;
      const double dense =
          operator_norm(materialize_shift_power(S, k, 2100, t.horizon() - k))
              .value;
      worst = std::max(worst,
                       std::abs(formula - dense) / std::max(dense, 1e-300));
    }
  }
  const bool ok = worst <= 1e-8;
  record("power-norm-vs-dense", ok, fmt("max_rel_err=%.2e over 150", worst));
}

// 5. Composition of two multiplier actions against the product symbol.
void c5_multiplier_products() {
  DetRng rng(444);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const DirectedTree t = random_tree(
        rng, {.depth = 7, .max_children = 3, .max_vertices = 900});
    const WeightSystem w = random_weights(t, rng, {.normalized = true});
    const ShiftOperator S(t, w);

    auto coeffs = [&](int deg) {
      std::vector<Complex> c(std::size_t(deg) + 1);
      for (auto& z : c) z = rng.next_complex_in_disc(1.0);
      c[0] += 0.5;  // keep the constant term away from zero
      return c;
    };
    const Symbol f = Symbol::finite(coeffs(1 + int(rng.next_below(2))));
    const Symbol g = Symbol::finite(coeffs(1 + int(rng.next_below(2))));
    const int deg = f.effective_degree() + g.effective_degree();
    const TreeVector h =
        random_support_vector(t, rng, 6, t.horizon() - deg);
    worst = std::max(worst, multiplier_product_check(S, f, g, h));
  }
  const bool ok = worst <= 1e-11;
  record("multiplier-product-identity", ok,
         fmt("max_defect=%.2e over 200", worst));
}

// 6. Coefficient lower bounds never cross the oracle norm.
void c6_coefficient_bounds() {
  DetRng rng(777);
  double worst = 1.0;  // smallest margin seen
  for (int trial = 0; trial < 50; ++trial) {
    const bool two_branch = trial % 2 == 0;
    const DirectedTree t = two_branch ? build_t20(30) : build_kary(2, 9);
    const WeightSystem w =
        two_branch ? make_t20_weights(t) : make_kary_weights(t, 2);
    const ShiftOperator S(t, w);

    const int deg = 1 + int(rng.next_below(6));
    std::vector<Complex> c(std::size_t(deg) + 1);
    for (auto& z : c)
      z = std::polar(rng.next_in(0.1, 2.0), rng.next_in(0.0, 6.28318));
    const Symbol symbol = Symbol::finite(c);

    const double oracle = operator_norm(materialize_multiplier(S, symbol)).value;
    for (double m : coefficient_bound_check(S, symbol, oracle, deg))
      worst = std::min(worst, m);
  }
  const bool ok = worst >= -1e-9;
  record("coefficient-bounds-vs-oracle", ok, fmt("min_margin=%.2e", worst));
}

// 7. Point evaluation turns the multiplier action into multiplication.
void c7_intertwining() {
  const DirectedTree t = build_t20(50);
  const WeightSystem w = make_t20_weights(t);
  const ShiftOperator S(t, w);
  DetRng rng(31415);

  const std::vector<Complex> points{
      {0.3, 0.0}, {-0.25, 0.0}, {0.2, 0.3}, {0.0, 0.45}, {0.49, 0.0}};
  std::vector<Symbol> symbols;
  symbols.push_back(Symbol::finite(
      {Complex(1.0, 0.0), Complex(-0.5, 0.25), Complex(0.0, 0.3), 0.125}));
  symbols.push_back(Symbol::geometric(1.0, 0.4));
  symbols.push_back(Symbol::indicator(2));

  double worst = 0.0;
  for (const Symbol& c : symbols) {
    const int room = t.horizon() - std::min(c.effective_degree(), t.horizon());
    for (const Complex& z : points) {
      for (int trial = 0; trial < 3; ++trial) {
        const TreeVector f =
            random_support_vector(t, rng, 8, std::max(room, 0));
        worst = std::max(worst, intertwining_residual(S, c, f, z));
      }
    }
  }
  const bool ok = worst <= 1e-10;
  record("evaluation-intertwines-multipliers", ok,
         fmt("max_residual=%.2e", worst));
}

// 8. Transporting the two-branch weights onto unweighted space and back.
void c8_unweighted_transport() {
  const DirectedTree t = build_t20(20);
  const WeightSystem w = make_t20_weights(t);
  const std::vector<Complex> mu = weights_to_ones(w);

  double table_err = 0.0;
  const WeightSystem expected = make_t20_mu_on_ones(t);
  for (VertexId v = 1; v < t.vertex_count(); ++v)
    table_err = std::max(table_err, std::abs(mu[v] - expected.lambda(v)));

  // The diagonal rescaling intertwines the two shifts and reproduces beta.
  std::vector<Complex> lambda(t.vertex_count());
  for (VertexId v = 0; v < t.vertex_count(); ++v) lambda[v] = w.lambda(v);
  const ConjugationFactors cf = unitary_conjugation_factors(t, mu, lambda);

  double beta_err = 0.0;
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    beta_err = std::max(beta_err, std::abs(cf.beta[v] - w.beta(v)) / w.beta(v));

  // The rescaling sends the unweighted shift to the weighted one.
  const WeightSystem ones(t, std::vector<double>(t.vertex_count(), 1.0), mu);
  const ShiftOperator S_w(t, w);
  const ShiftOperator S_mu(t, ones);
  DetRng rng(99);
  double twine_err = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const TreeVector g = random_support_vector(t, rng, 10, t.horizon() - 1);
    TreeVector ug;
    for (const auto& [v, x] : g.entries()) ug.set(v, cf.diag[v] * x);
    const TreeVector lhs = S_w.apply(ug).value;
    const TreeVector shifted = S_mu.apply(g).value;
    TreeVector rhs;
    for (const auto& [v, x] : shifted.entries()) rhs.set(v, cf.diag[v] * x);
    twine_err = std::max(twine_err, sup_distance(lhs, rhs));
  }

  const bool ok = table_err <= 1e-15 && beta_err <= 1e-12 && twine_err <= 1e-12;
  record("unweighted-transport-unitary", ok,
         fmt("table=%.2e beta=%.2e intertwine=%.2e", table_err, beta_err,
             twine_err));
}

// 9. Renormalized weight families have unit child sums to machine accuracy.
void c9_renormalization() {
  DetRng rng(1234);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const DirectedTree t = random_tree(
        rng, {.depth = 5 + int(rng.next_below(3)), .max_children = 4,
              .max_vertices = 1200});
    std::vector<Complex> mu(t.vertex_count(), 1.0);
    for (VertexId v = 1; v < t.vertex_count(); ++v)
      mu[v] = std::polar(rng.next_in(0.2, 1.5), rng.next_in(0.0, 6.28318));
    const NormalizedWeights nw = normalize_mu(t, mu);
    for (VertexId u = 0; u < t.vertex_count(); ++u) {
      if (t.child_count(u) == 0) continue;
      KahanSum sum;
      for (VertexId c : t.children(u)) sum.add(nw.lambda[c]);
      worst = std::max(worst, std::abs(sum.value() - 1.0));
    }
  }
  const bool ok = worst <= 1e-15;
  record("renormalization-unit-sums", ok,
         fmt("max_sum_defect=%.2e over 100", worst));
}

// 10. Norms ignore per-depth phase twists; evaluation respects the shift.
void c10_circularity_and_covariance() {
  DetRng rng(555);
  double norm_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DirectedTree t = random_tree(
        rng, {.depth = 6, .max_children = 3, .max_vertices = 1000});
    const WeightSystem w = random_weights(t, rng, {});
    std::vector<double> phase(std::size_t(t.horizon()) + 1);
    for (auto& p : phase) p = rng.next_in(0.0, 6.28318);
    std::vector<double> beta(t.vertex_count());
    std::vector<Complex> twisted(t.vertex_count(), 1.0);
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
      beta[v] = w.beta(v);
      if (v > 0)
        twisted[v] =
            w.lambda(v) * std::polar(1.0, phase[std::size_t(t.depth(v))]);
    }
    const ShiftOperator S(t, w);
    const WeightSystem tw(t, std::move(beta), std::move(twisted));
    const ShiftOperator St(t, tw);
    for (int k = 1; k <= 2; ++k) {
      norm_err = std::max(norm_err, std::abs(S.power_norm(k).norm -
                                             St.power_norm(k).norm));
    }
  }

  double cov_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DirectedTree t = random_tree(
        rng, {.depth = 6, .max_children = 3, .max_vertices = 1000});
    const WeightSystem w = random_weights(t, rng, {.normalized = true});
    const ShiftOperator S(t, w);
    const TreeVector f = random_support_vector(t, rng, 10, t.horizon() - 1);
    const TreeVector sf = S.apply(f).value;
    for (const Complex z : {Complex(0.4, 0.1), Complex(-0.3, 0.2)}) {
      const Complex lhs = point_evaluation(t, sf, z);
      const Complex rhs = z * point_evaluation(t, f, z);
      cov_err = std::max(cov_err,
                         std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  const bool ok = norm_err <= 1e-12 && cov_err <= 1e-12;
  record("phase-circularity-and-covariance", ok,
         fmt("norm=%.2e covariance=%.2e", norm_err, cov_err));
}

// 11. Slice sums grow fast enough to match the norm on the built-ins.
void c11_slice_growth() {
  double worst = 0.0;
  auto check = [&](const DirectedTree& t, const WeightSystem& w) {
    const ShiftOperator S(t, w);
    const double s2 = S.power_norm(1).sup_sq;
    const BpeProfile p = bpe_profile(S);
    for (std::size_t k = 0; k + 1 < p.c.size(); ++k)
      worst = std::max(worst, 1.0 - s2 * p.c[k + 1] / p.c[k]);
  };
  {
    const DirectedTree t = build_t20(60);
    check(t, make_t20_weights(t));
  }
  {
    const DirectedTree t = build_ray(60);
    check(t, make_unit_weights(t));
  }
  for (int kappa : {2, 3, 4}) {
    const DirectedTree t = build_kary(kappa, kappa == 2 ? 12 : kappa == 3 ? 10 : 8);
    check(t, make_kary_weights(t, kappa));
  }
  const bool ok = worst <= 1e-12;
  record("slice-growth-inequality", ok, fmt("max_violation=%.2e", worst));
}

}  // namespace

int main() {
  c1_evaluation_disc();
  c2_deep_path_radius();
  c3_kernel_eigenvectors();
  c4_power_norm_vs_dense();
  c5_multiplier_products();
  c6_coefficient_bounds();
  c7_intertwining();
  c8_unweighted_transport();
  c9_renormalization();
  c10_circularity_and_covariance();
  c11_slice_growth();

  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::printf("%d/%zu criteria passed\n", int(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
