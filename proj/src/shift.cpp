#include "treeshift/shift.hpp"

#include <cmath>
#include <string>

#include "treeshift/errors.hpp"

namespace treeshift {

ShiftOperator::ShiftOperator(const DirectedTree& tree, const WeightSystem& weights)
    : tree_(&tree), weights_(&weights) {
  if (&weights.tree() != &tree)
    throw SpecFormatError("ShiftOperator: weights built for a different tree");
}

ShiftOperator::VectorResult ShiftOperator::apply(const TreeVector& f) const {
  VectorResult out;
  const auto& t = *tree_;
  for (auto& [u, x] : f.entries()) {
    if (t.is_frontier(u)) {
      // the modelled children exist below the horizon; their values are lost
      out.truncation_flagged = true;
      continue;
    }
    for (VertexId c : t.children(u)) out.value.set(c, weights_->lambda(c) * x);
  }
  return out;
}

ShiftOperator::VectorResult ShiftOperator::apply_adjoint(const TreeVector& f) const {
  VectorResult out;
  const auto& t = *tree_;
  const auto& w = *weights_;
  // group contributions by parent; the map order makes sums deterministic
  std::map<VertexId, KahanComplexSum> acc;
  for (auto& [v, x] : f.entries()) {
    if (t.depth(v) >= t.horizon() - 1) out.truncation_flagged = true;
    if (v == 0) continue;  // adjoint kills the root component
    VertexId p = t.parent(v);
    acc[p].add(std::conj(w.lambda(v)) * (w.beta(v) / w.beta(p)) * x);
  }
  for (auto& [u, s] : acc) out.value.set(u, s.value());
  return out;
}

ShiftOperator::PowerNorm ShiftOperator::power_norm(int k, const ExecPolicy& exec) const {
  const auto& t = *tree_;
  const auto& w = *weights_;
  if (k < 1) throw SpecFormatError("power_norm: k must be >= 1");
  if (k > t.horizon())
    throw HorizonError("power_norm: k=" + std::to_string(k) +
                       " exceeds the stored horizon " + std::to_string(t.horizon()));

  const int scan_limit = t.horizon() - k;
  // candidate base vertices are exactly those at depth <= N - k; in the
  // id layouts produced by the builders these are a prefix of the slices
  std::vector<VertexId> bases;
  for (int d = 0; d <= scan_limit; ++d)
    for (VertexId u : t.depth_slice(d)) bases.push_back(u);

  struct ChunkBest {
    double best = -1.0;
    VertexId arg = kNoVertex;
  };
  std::vector<ChunkBest> best_per_chunk(chunk_count(bases.size(), exec.threads, 2048));

  run_chunked(bases.size(), exec.threads, 2048,
              [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                ChunkBest local;
                // DFS stack entries: (vertex, remaining levels, |prod|^2)
                std::vector<std::tuple<VertexId, int, double>> stack;
                for (std::size_t i = lo; i < hi; ++i) {
                  VertexId u = bases[i];
                  KahanSum cone;
                  stack.clear();
                  stack.emplace_back(u, k, 1.0);
                  while (!stack.empty()) {
                    auto [v, rem, prod2] = stack.back();
                    stack.pop_back();
                    if (rem == 0) {
                      cone.add(prod2 * w.beta(v));
                      continue;
                    }
                    for (VertexId c : t.children(v))
                      stack.emplace_back(c, rem - 1, prod2 * std::norm(w.lambda(c)));
                  }
                  double value = cone.value() / w.beta(u);
                  if (value > local.best) {
                    local.best = value;
                    local.arg = u;
                  }
                }
                best_per_chunk[chunk] = local;
              });

  PowerNorm out;
  out.scan_limit = scan_limit;
  double best = -1.0;
  VertexId arg = kNoVertex;
  for (auto& cb : best_per_chunk) {
    if (cb.arg != kNoVertex && cb.best > best) {
      best = cb.best;
      arg = cb.arg;
    }
  }
  out.sup_sq = best < 0.0 ? 0.0 : best;
  out.norm = std::sqrt(out.sup_sq);
  out.argmax = arg;
  out.stabilized_depth = arg == kNoVertex ? 0 : t.depth(arg);
  return out;
}

ShiftOperator::BoundednessReport ShiftOperator::boundedness_margin(
    const ExecPolicy& exec) const {
  const auto& t = *tree_;
  const auto& w = *weights_;
  BoundednessReport out;
  out.slice_max.assign(std::size_t(t.horizon()), 0.0);
  for (int d = 0; d < t.horizon(); ++d) {
    auto slice = t.depth_slice(d);
    std::vector<double> chunk_max(chunk_count(slice.size(), exec.threads, 4096), 0.0);
    run_chunked(slice.size(), exec.threads, 4096,
                [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                  double local = 0.0;
                  for (std::size_t i = lo; i < hi; ++i) {
                    VertexId u = slice[i];
                    KahanSum s;
                    for (VertexId c : t.children(u))
                      s.add(std::norm(w.lambda(c)) * w.beta(c) / w.beta(u));
                    local = std::max(local, s.value());
                  }
                  chunk_max[chunk] = local;
                });
    double m = 0.0;
    for (double c : chunk_max) m = std::max(m, c);
    out.slice_max[std::size_t(d)] = m;
    out.sup_sq = std::max(out.sup_sq, m);
  }
  out.increasing_trend = out.slice_max.size() >= 2;
  for (std::size_t d = 1; d < out.slice_max.size(); ++d)
    if (!(out.slice_max[d] > out.slice_max[d - 1])) {
      out.increasing_trend = false;
      break;
    }
  return out;
}

ShiftOperator::GelfandEstimate ShiftOperator::spectral_radius_estimate(
    int kmax, const ExecPolicy& exec) const {
  if (kmax < 1) throw SpecFormatError("spectral_radius_estimate: kmax must be >= 1");
  GelfandEstimate out;
  out.seq.reserve(std::size_t(kmax));
  for (int k = 1; k <= kmax; ++k) {
    double nk = power_norm(k, exec).norm;
    out.seq.push_back(std::pow(nk, 1.0 / double(k)));
  }
  out.estimate = out.seq.back();
  for (std::size_t i = 1; i < out.seq.size(); ++i)
    if (out.seq[i] > out.seq[i - 1] * (1.0 + 1e-12)) {
      out.nonincreasing = false;
      break;
    }
  return out;
}

}  // namespace treeshift
