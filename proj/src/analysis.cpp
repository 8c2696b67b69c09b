#include "treeshift/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "treeshift/errors.hpp"

namespace treeshift {

namespace {

// Fixed-size blocks keep the reduction order independent of the thread
// count, so sums are bit-identical under any ExecPolicy.
constexpr std::size_t kSumBlock = 8192;

template <typename Fetch>
double block_sum(std::size_t n, const ExecPolicy& exec, Fetch fetch) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(nblocks, 0.0);
  run_chunked(nblocks, exec.threads, 1, [&](std::size_t, std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      KahanSum s;
      const std::size_t lo = b * kSumBlock;
      const std::size_t hi = std::min(n, lo + kSumBlock);
      for (std::size_t i = lo; i < hi; ++i) s.add(fetch(i));
      partial[b] = s.value();
    }
  });
  KahanSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

double root_sample(double log_value, int k) {
  return std::exp(log_value / static_cast<double>(2 * k));
}

}  // namespace

TailWindow tail_window(int horizon) {
  TailWindow w;
  w.lo = std::max(1, (horizon + 1) / 2);
  w.hi = horizon;
  return w;
}

BpeProfile bpe_profile(const ShiftOperator& S, const ExecPolicy& exec) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& w = S.weights();
  const int n = tree.horizon();

  BpeProfile out;
  out.c.resize(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    auto slice = tree.depth_slice(k);
    out.c[static_cast<std::size_t>(k)] =
        block_sum(slice.size(), exec, [&](std::size_t i) { return 1.0 / w.beta(slice[i]); });
  }

  auto window_root_max = [&](TailWindow win) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int k = win.lo; k <= win.hi; ++k) {
      const double sample = root_sample(std::log(out.c[static_cast<std::size_t>(k)]), k);
      if (first) {
        lo = hi = sample;
        first = false;
      } else {
        lo = std::min(lo, sample);
        hi = std::max(hi, sample);
      }
    }
    return std::pair<double, double>{lo, hi};
  };

  const TailWindow win = tail_window(n);
  if (win.hi < win.lo) {
    out.unstable = true;
    return out;
  }
  auto [low, high] = window_root_max(win);
  out.window_low = low;
  out.window_high = high;
  out.radius = high > 0.0 ? 1.0 / high : 0.0;
  out.window_spread_rel = high > 0.0 ? (high - low) / high : 0.0;
  out.unstable = out.window_spread_rel > 1e-3;

  const TailWindow half = tail_window(win.lo);
  if (half.hi >= half.lo) {
    auto [hlow, hhigh] = window_root_max(half);
    (void)hlow;
    out.radius_at_half = hhigh > 0.0 ? 1.0 / hhigh : 0.0;
    out.half_gap_rel = out.radius > 0.0
                           ? std::abs(out.radius - out.radius_at_half) / out.radius
                           : 0.0;
  }
  return out;
}

std::string to_string(BpeVerdict v) {
  switch (v) {
    case BpeVerdict::kInside:
      return "inside";
    case BpeVerdict::kOutside:
      return "outside";
    default:
      return "boundary-indeterminate";
  }
}

BpeDecision is_bpe(const BpeProfile& profile, Complex w, double guard_band) {
  BpeDecision out;
  const double q = std::abs(w) * profile.window_high;
  out.ratio = q;
  if (q < 1.0 - guard_band) {
    out.verdict = BpeVerdict::kInside;
  } else if (q > 1.0 + guard_band) {
    out.verdict = BpeVerdict::kOutside;
  } else {
    out.verdict = BpeVerdict::kBoundaryIndeterminate;
  }
  const double ww = std::norm(w);
  KahanSum partial;
  double pw = 1.0;
  const std::size_t head = std::min<std::size_t>(profile.c.size(), 13);
  for (std::size_t k = 0; k < head; ++k) {
    partial.add(profile.c[k] * pw);
    out.partial_sums.push_back(partial.value());
    pw *= ww;
  }
  return out;
}

EvaluationKernel evaluation_kernel(const ShiftOperator& S, Complex w,
                                   const BpeProfile* profile) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();
  EvaluationKernel out;
  out.w = w;
  out.values.resize(tree.vertex_count());

  std::vector<Complex> pw(static_cast<std::size_t>(tree.horizon()) + 1);
  pw[0] = 1.0;
  const Complex cw = std::conj(w);
  for (std::size_t d = 1; d < pw.size(); ++d) pw[d] = pw[d - 1] * cw;

  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    out.values[v] = pw[static_cast<std::size_t>(tree.depth(v))] / ws.beta(v);
  }
  if (profile != nullptr && profile->radius > 0.0) {
    out.radius_warning = std::abs(w) >= profile->radius;
  }
  return out;
}

Complex point_evaluation(const DirectedTree& tree, const TreeVector& f, Complex w) {
  const int dmax = f.max_support_depth(tree);
  std::vector<Complex> pw(static_cast<std::size_t>(std::max(dmax, 0)) + 1);
  pw[0] = 1.0;
  for (std::size_t d = 1; d < pw.size(); ++d) pw[d] = pw[d - 1] * w;
  KahanComplexSum acc;
  for (const auto& [v, x] : f.entries()) {
    acc.add(x * pw[static_cast<std::size_t>(tree.depth(v))]);
  }
  return acc.value();
}

double adjoint_eigen_residual(const ShiftOperator& S, Complex w, int interior_depth) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();
  ws.require_positive("adjoint_eigen_residual");
  ws.require_normalized(1e-9, "adjoint_eigen_residual");

  const EvaluationKernel ker = evaluation_kernel(S, w);
  const Complex cw = std::conj(w);
  const int cap = std::min(interior_depth, tree.horizon() - 1);

  double worst = 0.0;
  for (int d = 0; d <= cap; ++d) {
    for (VertexId u : tree.depth_slice(d)) {
      KahanComplexSum acc;
      for (VertexId c : tree.children(u)) {
        acc.add(std::conj(ws.lambda(c)) * (ws.beta(c) / ws.beta(u)) * ker.values[c]);
      }
      const double defect = std::abs(acc.value() - cw * ker.values[u]);
      worst = std::max(worst, defect / (1.0 + std::abs(ker.values[u])));
    }
  }
  return worst;
}

double intertwining_residual(const ShiftOperator& S, const Symbol& c,
                             const TreeVector& f, Complex w) {
  const DirectedTree& tree = S.tree();
  S.weights().require_positive("intertwining_residual");
  S.weights().require_normalized(1e-9, "intertwining_residual");

  const int deg = c.effective_degree();
  const int supp = f.max_support_depth(tree);
  if (supp >= 0 && supp + deg > tree.horizon()) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "intertwining_residual: support depth %d plus symbol reach %d "
                  "exceeds horizon %d",
                  supp, deg, tree.horizon());
    throw TruncationError(buf);
  }

  const TreeVector g = gamma_apply(S, c, f);
  const Complex lhs = point_evaluation(tree, g, w);
  const Complex rhs = c.eval(w) * point_evaluation(tree, f, w);
  return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

double multiplier_adjoint_eigen_residual(const ShiftOperator& S, const Symbol& c,
                                         Complex w, std::size_t dense_budget) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();
  ws.require_positive("multiplier_adjoint_eigen_residual");
  ws.require_normalized(1e-9, "multiplier_adjoint_eigen_residual");

  const DenseOperator M = materialize_multiplier(S, c, dense_budget);
  const EvaluationKernel ker = evaluation_kernel(S, w);
  const std::vector<Complex> image = M.metric_adjoint_apply(ker.values);

  const Complex ev = std::conj(c.eval(w));
  const int cap = std::max(0, tree.horizon() - c.effective_degree());
  double worst = 0.0;
  for (int d = 0; d <= cap; ++d) {
    for (VertexId u : tree.depth_slice(d)) {
      const double defect = std::abs(image[u] - ev * ker.values[u]);
      worst = std::max(worst, defect / (1.0 + std::abs(ker.values[u])));
    }
  }
  return worst;
}

namespace {

void check_path(const DirectedTree& tree, std::span<const VertexId> path) {
  if (path.empty() || path[0] != 0) {
    throw TreeStructureError("path must start at the root");
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] >= tree.vertex_count() || tree.parent(path[i]) != path[i - 1]) {
      throw TreeStructureError("path entries must follow parent links");
    }
  }
}

// log(a_k) for the vertex at depth k of a root chain, from the cached
// log |lambda_{root|v}| prefix.
double log_sample(const WeightSystem& ws, VertexId v, int k) {
  const double num = 0.5 * std::log(ws.beta(v)) + ws.log_abs_root_product(v);
  return num / static_cast<double>(k);
}

}  // namespace

PathRadius path_r2(const ShiftOperator& S, std::span<const VertexId> path) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();
  check_path(tree, path);

  PathRadius out;
  out.path.assign(path.begin(), path.end());
  const int n = static_cast<int>(path.size()) - 1;
  out.samples.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 1; k <= n; ++k) {
    out.samples.push_back(std::exp(log_sample(ws, path[static_cast<std::size_t>(k)], k)));
  }
  if (n < 1) return out;

  auto window_min_max = [&](TailWindow win) {
    double lo = out.samples[static_cast<std::size_t>(win.lo - 1)];
    double hi = lo;
    for (int k = win.lo + 1; k <= win.hi; ++k) {
      const double s = out.samples[static_cast<std::size_t>(k - 1)];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return std::pair<double, double>{lo, hi};
  };

  const TailWindow win = tail_window(n);
  auto [lo, hi] = window_min_max(win);
  out.r2 = lo;
  out.tail_max = hi;
  const TailWindow half = tail_window(win.lo);
  if (half.hi >= half.lo) {
    out.r2_at_half = window_min_max(half).first;
    out.half_gap_rel = out.r2 > 0.0 ? std::abs(out.r2 - out.r2_at_half) / out.r2 : 0.0;
  }
  out.bpe_radius = path_bpe_radius(S, path);
  return out;
}

double path_bpe_radius(const ShiftOperator& S, std::span<const VertexId> path) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();
  check_path(tree, path);
  const int n = static_cast<int>(path.size()) - 1;
  if (n < 1) return 0.0;
  const TailWindow win = tail_window(n);
  double worst = 0.0;
  for (int k = win.lo; k <= win.hi; ++k) {
    const VertexId v = path[static_cast<std::size_t>(k)];
    // beta^(-1/2k): root-test sample of the single-path evaluation series.
    worst = std::max(worst, std::exp(-std::log(ws.beta(v)) / static_cast<double>(2 * k)));
  }
  return worst > 0.0 ? 1.0 / worst : 0.0;
}

R2PlusEstimate r2_plus(const ShiftOperator& S, std::size_t path_budget,
                       const ExecPolicy& exec) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();

  R2PlusEstimate out;
  auto en = tree.enumerate_paths(path_budget);
  out.enumeration_complete = en.complete;
  out.paths.reserve(en.paths.size());
  for (const auto& p : en.paths) {
    out.paths.push_back(path_r2(S, p));
    out.path_max = std::max(out.path_max, out.paths.back().r2);
  }

  // Every frontier vertex pins down the stored initial segment of some
  // path; its tail-window minimum bounds that path's radius sample-wise.
  const auto& frontier = tree.frontier();
  const std::size_t nf = frontier.size();
  std::vector<double> best(chunk_count(nf, exec.threads, 256), 0.0);
  run_chunked(nf, exec.threads, 256, [&](std::size_t ci, std::size_t i0, std::size_t i1) {
    double acc = 0.0;
    std::vector<VertexId> chain;
    for (std::size_t i = i0; i < i1; ++i) {
      chain.clear();
      for (VertexId v = frontier[i]; v != 0; v = tree.parent(v)) chain.push_back(v);
      // chain[j] sits at depth (chain.size() - j); reverse index below.
      const int n = static_cast<int>(chain.size());
      if (n < 1) continue;
      const TailWindow win = tail_window(n);
      double lo = 0.0;
      bool first = true;
      for (int k = win.lo; k <= win.hi; ++k) {
        const VertexId v = chain[static_cast<std::size_t>(n - k)];
        const double s = std::exp(log_sample(ws, v, k));
        if (first) {
          lo = s;
          first = false;
        } else {
          lo = std::min(lo, s);
        }
      }
      acc = std::max(acc, lo);
    }
    best[ci] = acc;
  });
  for (double b : best) out.frontier_proxy = std::max(out.frontier_proxy, b);

  out.estimate = std::max(out.path_max, out.frontier_proxy);
  return out;
}

SpectralReport spectral_report(const ShiftOperator& S, const ReportOptions& opt) {
  const DirectedTree& tree = S.tree();
  const WeightSystem& ws = S.weights();

  SpectralReport out;
  const ShiftOperator::PowerNorm pn = S.power_norm(1, opt.exec);
  out.norm = pn.norm;
  out.norm_argmax = pn.argmax;
  out.norm_stabilized_depth = pn.stabilized_depth;

  const int kmax = std::max(1, std::min(opt.gelfand_kmax, tree.horizon()));
  const ShiftOperator::GelfandEstimate ge = S.spectral_radius_estimate(kmax, opt.exec);
  out.gelfand_seq = ge.seq;
  out.spectral_radius_estimate = ge.estimate;

  out.bpe = bpe_profile(S, opt.exec);
  out.r2 = r2_plus(S, opt.path_budget, opt.exec);

  out.normalized = ws.lambdas_positive() && ws.check_normalized(1e-9).ok();
  for (VertexId v : tree.branching_vertices()) {
    out.branching_depth_max = std::max(out.branching_depth_max, tree.depth(v));
  }

  out.inclusions.push_back({"bpe_disc_subset_sigma_p_adjoint", out.bpe.radius, "theory"});
  out.inclusions.push_back(
      {"r2plus_disc_subset_sigma_p_adjoint", out.r2.estimate, "theory"});
  out.inclusions.push_back(
      {"path_disc_sigma_p_compression", out.r2.path_max, "theory"});
  const bool branching_settled =
      out.branching_depth_max < tail_window(tree.horizon()).lo;
  if (out.normalized && branching_settled) {
    out.inclusions.push_back(
        {"sigma_p_adjoint_subset_closed_r2plus_disc", out.r2.estimate, "theory"});
  }
  return out;
}

}  // namespace treeshift
