#include "treeshift/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "treeshift/errors.hpp"

namespace treeshift {

TreeVector gamma_apply(const ShiftOperator& S, const Symbol& c, const TreeVector& f,
                       const ExecPolicy& exec) {
  const auto& t = S.tree();
  const auto& w = S.weights();
  TreeVector out;
  if (f.empty()) return out;

  const int reach = std::min(c.effective_degree(), t.horizon());

  // candidate outputs: stored descendants of the support within reach
  std::vector<VertexId> targets;
  {
    std::vector<char> seen(t.vertex_count(), 0);
    for (auto& [u, x] : f.entries()) {
      auto cone = t.descendants_within(u, reach);
      for (VertexId v : cone.vertices)
        if (!seen[v]) {
          seen[v] = 1;
          targets.push_back(v);
        }
    }
    std::sort(targets.begin(), targets.end());
  }

  std::vector<Complex> values(targets.size());
  run_chunked(targets.size(), exec.threads, 1024,
              [&](std::size_t, std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) {
                  VertexId v = targets[i];
                  KahanComplexSum s;
                  Complex chain = 1.0;  // lambda_{pa^k(v)|v}, k = 0 term first
                  VertexId a = v;
                  for (int k = 0; k <= t.depth(v) && k <= reach; ++k) {
                    Complex fa = f.at(a);
                    if (fa != Complex(0.0)) s.add(chain * c.coeff(k) * fa);
                    if (a == 0) break;
                    chain *= w.lambda(a);
                    a = t.parent(a);
                  }
                  values[i] = s.value();
                }
              });

  for (std::size_t i = 0; i < targets.size(); ++i) out.set(targets[i], values[i]);
  return out;
}

double multiplier_product_check(const ShiftOperator& S, const Symbol& f,
                                const Symbol& g, const TreeVector& h,
                                const ExecPolicy& exec) {
  S.weights().require_positive("multiplier_product_check");
  const auto& t = S.tree();
  const int deg = f.effective_degree() + g.effective_degree();
  const int support_depth = h.max_support_depth(t);
  if (support_depth >= 0 && support_depth + deg > t.horizon())
    throw TruncationError(
        "multiplier_product_check: support reaches depth " +
        std::to_string(support_depth) + " and the product has degree " +
        std::to_string(deg) + ", past the stored horizon " +
        std::to_string(t.horizon()));

  TreeVector chained = gamma_apply(S, f, gamma_apply(S, g, h, exec), exec);
  Symbol prod = f.finitely_supported() && g.finitely_supported()
                    ? cauchy_mult(f, g)
                    : cauchy_mult_truncated(f, g, deg);
  TreeVector direct = gamma_apply(S, prod, h, exec);

  chained *= -1.0;
  direct += chained;
  return norm_beta(direct, S.weights());
}

std::vector<double> coefficient_bound_check(const ShiftOperator& S, const Symbol& c,
                                            double norm_M, int kmax,
                                            const ExecPolicy& exec) {
  S.weights().require_positive("coefficient_bound_check");
  if (kmax < 0) throw SpecFormatError("coefficient_bound_check: negative kmax");
  std::vector<double> margins;
  margins.reserve(std::size_t(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double nk = k == 0 ? 1.0 : S.power_norm(k, exec).norm;
    margins.push_back(norm_M - std::abs(c.coeff(k)) * nk);
  }
  return margins;
}

NormUpperEstimate multiplier_norm_upper(const Symbol& c, double norm_s, int grid) {
  if (!(norm_s >= 0.0)) throw SpecFormatError("multiplier_norm_upper: bad radius");
  if (grid < 1) throw SpecFormatError("multiplier_norm_upper: bad grid");
  if (auto r = c.decay_ratio())
    if (*r * norm_s >= 1.0)
      throw DivergentSeriesError(
          "multiplier_norm_upper: series diverges on the circle |z| = " +
          std::to_string(norm_s));

  const double two_pi = 6.283185307179586476925286766559;
  auto scan = [&](int m) {
    double best = 0.0;
    for (int j = 0; j < m; ++j) {
      const double th = two_pi * double(j) / double(m);
      const Complex z = norm_s * Complex(std::cos(th), std::sin(th));
      best = std::max(best, std::abs(c.eval(z)));
    }
    return best;
  };

  NormUpperEstimate out;
  out.coarse = scan(grid);
  out.grid = 2 * grid;
  out.value = scan(2 * grid);
  out.value = std::max(out.value, out.coarse);
  out.rel_change = (out.value - out.coarse) / std::max(out.value, 1e-300);
  return out;
}

}  // namespace treeshift
