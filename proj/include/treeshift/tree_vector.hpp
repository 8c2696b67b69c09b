#ifndef TREESHIFT_TREE_VECTOR_HPP
#define TREESHIFT_TREE_VECTOR_HPP

#include <map>

#include "treeshift/numeric.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

// Finitely supported vector on the stored vertex set. Entries live in an
// ordered map so iteration order, and with it every accumulated sum, is
// reproducible.
class TreeVector {
 public:
  using Map = std::map<VertexId, Complex>;

  TreeVector() = default;

  static TreeVector basis(VertexId v) {
    TreeVector f;
    f.set(v, 1.0);
    return f;
  }

  void set(VertexId v, Complex value) {
    if (value == Complex(0.0))
      entries_.erase(v);
    else
      entries_[v] = value;
  }
  void accumulate(VertexId v, Complex value) {
    auto [it, fresh] = entries_.try_emplace(v, value);
    if (!fresh) it->second += value;
  }
  Complex at(VertexId v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? Complex(0.0) : it->second;
  }

  const Map& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  int max_support_depth(const DirectedTree& tree) const {
    int d = -1;
    for (auto& [v, x] : entries_) d = std::max(d, tree.depth(v));
    return d;
  }

  TreeVector& operator+=(const TreeVector& other) {
    for (auto& [v, x] : other.entries_) accumulate(v, x);
    return *this;
  }
  TreeVector& operator*=(Complex a) {
    for (auto& [v, x] : entries_) x *= a;
    return *this;
  }

 private:
  Map entries_;
};

inline Complex inner_product(const TreeVector& f, const TreeVector& g,
                             const WeightSystem& w) {
  // <f, g> = sum f(v) conj(g(v)) beta_v over the smaller support
  const TreeVector& small = f.support_size() <= g.support_size() ? f : g;
  const TreeVector& big = &small == &f ? g : f;
  KahanComplexSum s;
  for (auto& [v, x] : small.entries()) {
    Complex other = big.at(v);
    if (other == Complex(0.0)) continue;
    Complex fv = &small == &f ? x : other;
    Complex gv = &small == &f ? other : x;
    s.add(fv * std::conj(gv) * w.beta(v));
  }
  return s.value();
}

inline double norm_sq(const TreeVector& f, const WeightSystem& w) {
  KahanSum s;
  for (auto& [v, x] : f.entries()) s.add(std::norm(x) * w.beta(v));
  return s.value();
}

inline double norm_beta(const TreeVector& f, const WeightSystem& w) {
  return std::sqrt(norm_sq(f, w));
}

// max_v |f(v) - g(v)| over the union of supports
inline double sup_distance(const TreeVector& f, const TreeVector& g) {
  double m = 0.0;
  for (auto& [v, x] : f.entries()) m = std::max(m, std::abs(x - g.at(v)));
  for (auto& [v, x] : g.entries())
    if (f.at(v) == Complex(0.0)) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace treeshift

#endif
