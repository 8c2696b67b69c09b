#include "treeshift/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "treeshift/analysis.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/json_io.hpp"
#include "treeshift/multiplier.hpp"
#include "treeshift/oracle.hpp"

namespace treeshift {

namespace {

void run_check(VerifyReport& report, const std::string& name, double tol,
               const std::function<double()>& body) {
  CheckResult r;
  r.name = name;
  r.tol = tol;
  try {
    r.measure = body();
    r.passed = r.measure <= tol;
  } catch (const Error& e) {
    r.passed = false;
    r.note = e.what();
  }
  report.checks.push_back(std::move(r));
}

void skip_check(VerifyReport& report, const std::string& name, const std::string& why) {
  CheckResult r;
  r.name = name;
  r.passed = true;
  r.note = "skipped (" + why + ")";
  report.checks.push_back(std::move(r));
}

TreeVector random_vector(const DirectedTree& tree, DetRng& rng, std::size_t want,
                         int max_depth) {
  TreeVector f;
  const std::size_t n = tree.vertex_count();
  for (std::size_t tries = 0; tries < 40 * want && f.support_size() < want; ++tries) {
    const VertexId v = static_cast<VertexId>(rng.next_below(n));
    if (tree.depth(v) <= max_depth) {
      f.set(v, rng.next_complex_in_disc(1.0));
    }
  }
  return f;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

VerifyReport run_verification(const ShiftOperator& S, const ExecPolicy& exec) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& w = S.weights();
  const std::size_t n = tree.vertex_count();
  const int N = tree.horizon();
  const bool normalized = w.lambdas_positive() && w.is_normalized(1e-9);

  VerifyReport report;
  DetRng rng(0xABCD1234ULL + n);

  run_check(report, "tree-invariants", 0.0, [&] {
    std::size_t bad = 0;
    if (tree.parent(0) != kNoVertex || tree.depth(0) != 0) ++bad;
    std::size_t slice_total = 0;
    for (int d = 0; d <= N; ++d) slice_total += tree.depth_slice(d).size();
    if (slice_total != n) ++bad;
    for (VertexId v = 1; v < n; ++v) {
      const VertexId p = tree.parent(v);
      if (p >= n || tree.depth(v) != tree.depth(p) + 1) ++bad;
      const auto kids = tree.children(p);
      if (std::find(kids.begin(), kids.end(), v) == kids.end()) ++bad;
    }
    for (VertexId v = 0; v < n; ++v) {
      if (tree.is_interior(v) && tree.child_count(v) == 0) ++bad;
      if (tree.is_frontier(v) && tree.child_count(v) != 0) ++bad;
    }
    return static_cast<double>(bad);
  });

  run_check(report, "adjoint-pairing", 1e-12, [&] {
    const TreeVector f = random_vector(tree, rng, 40, N);
    const TreeVector g = random_vector(tree, rng, 40, N);
    const Complex lhs = inner_product(S.apply(f).value, g, w);
    const Complex rhs = inner_product(f, S.apply_adjoint(g).value, w);
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
  });

  run_check(report, "power-norm-submultiplicative", 1e-12, [&] {
    double worst = 0.0;
    for (auto [j, k] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
      if (j + k > N) continue;
      const double lhs = S.power_norm(j + k, exec).norm;
      const double rhs = S.power_norm(j, exec).norm * S.power_norm(k, exec).norm;
      worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
    }
    return worst;
  });

  if (n <= kDenseBudget) {
    run_check(report, "norm-matches-dense", 1e-8, [&] {
      const double formula = S.power_norm(1, exec).norm;
      const double dense = operator_norm(materialize_shift(S)).value;
      return rel_diff(formula, dense);
    });
  } else {
    skip_check(report, "norm-matches-dense", "tree too large for the dense oracle");
  }

  run_check(report, "riesz-representation", 1e-12, [&] {
    const Complex z(0.35, 0.2);
    const TreeVector f = random_vector(tree, rng, 40, N);
    const EvaluationKernel ker = evaluation_kernel(S, z);
    TreeVector kv;
    for (const auto& [v, x] : f.entries()) kv.set(v, ker.values[v]);
    const Complex lhs = inner_product(f, kv, w);
    const Complex rhs = point_evaluation(tree, f, z);
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
  });

  if (normalized) {
    run_check(report, "shift-covariance", 1e-12, [&] {
      const TreeVector f = random_vector(tree, rng, 30, N - 1);
      double worst = 0.0;
      for (Complex z : {Complex(0.3, 0.0), Complex(-0.25, 0.35), Complex(0.0, 0.5)}) {
        const Complex lhs = point_evaluation(tree, S.apply(f).value, z);
        const Complex rhs = z * point_evaluation(tree, f, z);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
      }
      return worst;
    });

    run_check(report, "adjoint-kernel-eigenvector", 1e-10, [&] {
      const BpeProfile profile = bpe_profile(S, exec);
      const Complex z = std::polar(0.5 * profile.radius, 0.9);
      return adjoint_eigen_residual(S, z, N - 1);
    });
  } else {
    skip_check(report, "shift-covariance", "weights not normalized");
    skip_check(report, "adjoint-kernel-eigenvector", "weights not normalized");
  }

  if (w.lambdas_positive() && N >= 4) {
    run_check(report, "multiplier-product", 1e-11, [&] {
      const Symbol f = Symbol::finite({1.0, 0.5, 0.25});
      const Symbol g = Symbol::finite({1.0, -0.5});
      TreeVector h;
      h.set(0, 1.0);
      const auto kids = tree.children(0);
      if (!kids.empty()) h.set(kids[0], 0.4);
      return multiplier_product_check(S, f, g, h, exec);
    });
  } else {
    skip_check(report, "multiplier-product",
               w.lambdas_positive() ? "horizon too small" : "weights not positive");
  }

  if (N >= 3) {
    run_check(report, "indicator-matches-power", 1e-12, [&] {
      TreeVector f;
      f.set(0, 1.0);
      const auto kids = tree.children(0);
      if (!kids.empty()) f.set(kids[0], 0.3);
      const TreeVector g1 = gamma_apply(S, Symbol::indicator(1), f, exec);
      const TreeVector s1 = S.apply(f).value;
      const TreeVector g2 = gamma_apply(S, Symbol::indicator(2), f, exec);
      const TreeVector s2 = S.apply(s1).value;
      return std::max(sup_distance(g1, s1), sup_distance(g2, s2));
    });
  } else {
    skip_check(report, "indicator-matches-power", "horizon too small");
  }

  run_check(report, "cesaro-coefficient-identity", 1e-15, [&] {
    const Symbol f = Symbol::geometric(1.0, 0.6);
    double worst = 0.0;
    for (int k : {7, 15}) {
      const Symbol avg = cesaro_symbol(f, k);
      for (int m = 0; m <= k; ++m) {
        const Complex want =
            f.coeff(m) * (1.0 - static_cast<double>(m) / static_cast<double>(k + 1));
        worst = std::max(worst, std::abs(avg.coeff(m) - want));
      }
    }
    return worst;
  });

  run_check(report, "phase-twist-norm-invariance", 1e-12, [&] {
    std::vector<double> theta(static_cast<std::size_t>(N) + 1, 0.0);
    for (auto& t : theta) t = rng.next_in(0.0, 6.283185307179586);
    std::vector<double> beta(n);
    std::vector<Complex> lambda(n);
    for (VertexId v = 0; v < n; ++v) {
      beta[v] = w.beta(v);
      lambda[v] =
          w.lambda(v) * std::polar(1.0, theta[static_cast<std::size_t>(tree.depth(v))]);
    }
    const WeightSystem tw(tree, std::move(beta), std::move(lambda));
    const ShiftOperator st(tree, tw);
    double worst = 0.0;
    for (int k = 1; k <= std::min(2, N); ++k) {
      worst = std::max(
          worst, rel_diff(S.power_norm(k, exec).norm, st.power_norm(k, exec).norm));
    }
    return worst;
  });

  if (normalized) {
    run_check(report, "slice-growth-inequality", 1e-12, [&] {
      const double s2 = S.power_norm(1, exec).sup_sq;
      const BpeProfile profile = bpe_profile(S, exec);
      double worst = 0.0;
      for (int k = 0; k < N; ++k) {
        const double ratio = profile.c[static_cast<std::size_t>(k + 1)] /
                             profile.c[static_cast<std::size_t>(k)];
        worst = std::max(worst, 1.0 - s2 * ratio);
      }
      return worst;
    });

    run_check(report, "renormalization-consistency", 1e-12, [&] {
      const std::vector<Complex> mu = weights_to_ones(w);
      const NormalizedWeights nw = normalize_mu(tree, mu);
      std::vector<Complex> lam(nw.lambda.begin(), nw.lambda.end());
      const WeightSystem check(tree, nw.beta, lam);
      if (!check.is_normalized(1e-12)) return 1.0;
      const ConjugationFactors cf = unitary_conjugation_factors(tree, mu, lam);
      double worst = 0.0;
      for (VertexId v = 0; v < n; ++v) worst = std::max(worst, rel_diff(cf.beta[v], nw.beta[v]));
      return worst;
    });
  } else {
    skip_check(report, "slice-growth-inequality", "weights not normalized");
    skip_check(report, "renormalization-consistency", "weights not normalized");
  }

  if (n <= 1'000'000) {
    run_check(report, "serialization-roundtrip", 0.0, [&] {
      const TreeSpec spec = serialize_tree(tree);
      const DirectedTree rebuilt = build_explicit(spec);
      return same_topology(tree, rebuilt) ? 0.0 : 1.0;
    });
  } else {
    skip_check(report, "serialization-roundtrip", "tree too large");
  }

  return report;
}

}  // namespace treeshift
