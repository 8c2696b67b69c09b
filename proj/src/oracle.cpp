#include "treeshift/oracle.hpp"

#include <cmath>
#include <string>

#include "treeshift/errors.hpp"

namespace treeshift {

DenseOperator::DenseOperator(std::size_t n, std::vector<double> sqrt_beta)
    : n_(n), sqrt_beta_(std::move(sqrt_beta)), data_(n * n, Complex(0.0)) {
  if (sqrt_beta_.size() != n_)
    throw SpecFormatError("DenseOperator: sqrt_beta size mismatch");
}

std::vector<Complex> DenseOperator::apply_ortho(const std::vector<Complex>& x) const {
  std::vector<Complex> y(n_, Complex(0.0));
  for (std::size_t r = 0; r < n_; ++r) {
    KahanComplexSum s;
    const Complex* row = data_.data() + r * n_;
    for (std::size_t c = 0; c < n_; ++c)
      if (row[c] != Complex(0.0)) s.add(row[c] * x[c]);
    y[r] = s.value();
  }
  return y;
}

std::vector<Complex> DenseOperator::apply_ortho_adjoint(
    const std::vector<Complex>& x) const {
  std::vector<Complex> y(n_, Complex(0.0));
  // y = A^H x accumulated row-wise so memory access stays sequential
  std::vector<KahanComplexSum> acc(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    const Complex* row = data_.data() + r * n_;
    const Complex xr = x[r];
    if (xr == Complex(0.0)) continue;
    for (std::size_t c = 0; c < n_; ++c)
      if (row[c] != Complex(0.0)) acc[c].add(std::conj(row[c]) * xr);
  }
  for (std::size_t c = 0; c < n_; ++c) y[c] = acc[c].value();
  return y;
}

std::vector<Complex> DenseOperator::metric_adjoint_apply(
    const std::vector<Complex>& f) const {
  std::vector<Complex> scaled(n_);
  for (std::size_t v = 0; v < n_; ++v) scaled[v] = f[v] * sqrt_beta_[v];
  auto out = apply_ortho_adjoint(scaled);
  for (std::size_t v = 0; v < n_; ++v) out[v] /= sqrt_beta_[v];
  return out;
}

namespace {

std::vector<double> sqrt_beta_of(const ShiftOperator& S) {
  const auto& t = S.tree();
  std::vector<double> sb(t.vertex_count());
  for (std::size_t v = 0; v < sb.size(); ++v)
    sb[v] = std::sqrt(S.weights().beta(VertexId(v)));
  return sb;
}

void check_budget(std::size_t n, std::size_t budget, const char* what) {
  if (n > budget)
    throw CapacityError(std::string(what) + ": " + std::to_string(n) +
                        " vertices exceed the dense budget " + std::to_string(budget));
}

}  // namespace

DenseOperator materialize_shift(const ShiftOperator& S, std::size_t budget) {
  const auto& t = S.tree();
  const std::size_t n = t.vertex_count();
  check_budget(n, budget, "materialize_shift");
  DenseOperator A(n, sqrt_beta_of(S));
  for (VertexId v = 1; v < n; ++v) {
    VertexId p = t.parent(v);
    A.set_ortho_entry(v, p, S.weights().lambda(v) *
                                std::sqrt(S.weights().beta(v) / S.weights().beta(p)));
  }
  return A;
}

DenseOperator materialize_shift_power(const ShiftOperator& S, int k,
                                      std::size_t budget,
                                      int restrict_columns_depth) {
  if (k < 0) throw SpecFormatError("materialize_shift_power: negative power");
  const auto& t = S.tree();
  const std::size_t n = t.vertex_count();
  check_budget(n, budget, "materialize_shift_power");

  DenseOperator base = materialize_shift(S, budget);
  DenseOperator acc(n, base.sqrt_beta());
  for (std::size_t v = 0; v < n; ++v) acc.set_ortho_entry(v, v, 1.0);

  for (int step = 0; step < k; ++step) {
    DenseOperator next(n, base.sqrt_beta());
    // next = base * acc, skipping zero left entries row by row
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t m = 0; m < n; ++m) {
        const Complex a = base.ortho_entry(r, m);
        if (a == Complex(0.0)) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const Complex b = acc.ortho_entry(m, c);
          if (b != Complex(0.0))
            next.set_ortho_entry(r, c, next.ortho_entry(r, c) + a * b);
        }
      }
    }
    acc = std::move(next);
  }

  if (restrict_columns_depth >= 0)
    for (std::size_t c = 0; c < n; ++c)
      if (t.depth(VertexId(c)) > restrict_columns_depth)
        for (std::size_t r = 0; r < n; ++r) acc.set_ortho_entry(r, c, 0.0);
  return acc;
}

DenseOperator materialize_multiplier(const ShiftOperator& S, const Symbol& c,
                                     std::size_t budget) {
  const auto& t = S.tree();
  const std::size_t n = t.vertex_count();
  check_budget(n, budget, "materialize_multiplier");
  DenseOperator A(n, sqrt_beta_of(S));
  const int reach = std::min(c.effective_degree(), t.horizon());
  for (VertexId v = 0; v < n; ++v) {
    Complex chain = 1.0;
    double scale_v = std::sqrt(S.weights().beta(v));
    VertexId a = v;
    for (int k = 0; k <= t.depth(v) && k <= reach; ++k) {
      const Complex ck = c.coeff(k);
      if (ck != Complex(0.0))
        A.set_ortho_entry(v, a,
                          chain * ck * scale_v / std::sqrt(S.weights().beta(a)));
      if (a == 0) break;
      chain *= S.weights().lambda(a);
      a = t.parent(a);
    }
  }
  return A;
}

namespace {

// Sparse row view of the nonzero pattern, for fast repeated application.
struct Csr {
  std::vector<std::size_t> off;
  std::vector<std::uint32_t> col;
  std::vector<Complex> val;

  static Csr from(const DenseOperator& A, bool adjoint) {
    const std::size_t n = A.size();
    Csr m;
    m.off.assign(n + 1, 0);
    if (!adjoint) {
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          if (A.ortho_entry(r, c) != Complex(0.0)) m.off[r + 1]++;
      for (std::size_t r = 0; r < n; ++r) m.off[r + 1] += m.off[r];
      m.col.resize(m.off[n]);
      m.val.resize(m.off[n]);
      std::vector<std::size_t> cur(m.off.begin(), m.off.end() - 1);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const Complex v = A.ortho_entry(r, c);
          if (v != Complex(0.0)) {
            m.col[cur[r]] = std::uint32_t(c);
            m.val[cur[r]++] = v;
          }
        }
    } else {
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          if (A.ortho_entry(r, c) != Complex(0.0)) m.off[c + 1]++;
      for (std::size_t r = 0; r < n; ++r) m.off[r + 1] += m.off[r];
      m.col.resize(m.off[n]);
      m.val.resize(m.off[n]);
      std::vector<std::size_t> cur(m.off.begin(), m.off.end() - 1);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const Complex v = A.ortho_entry(r, c);
          if (v != Complex(0.0)) {
            m.col[cur[c]] = std::uint32_t(r);
            m.val[cur[c]++] = std::conj(v);
          }
        }
    }
    return m;
  }

  void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const {
    const std::size_t n = off.size() - 1;
    for (std::size_t r = 0; r < n; ++r) {
      Complex s = 0.0;
      for (std::size_t i = off[r]; i < off[r + 1]; ++i) s += val[i] * x[col[i]];
      y[r] = s;
    }
  }
};

double dot_real(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  KahanComplexSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::conj(a[i]) * b[i]);
  return s.value().real();
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  KahanComplexSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::conj(a[i]) * b[i]);
  return s.value();
}

double norm2(const std::vector<Complex>& a) {
  KahanSum s;
  for (auto& z : a) s.add(std::norm(z));
  return std::sqrt(s.value());
}

void axpy(std::vector<Complex>& y, Complex a, const std::vector<Complex>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

OperatorNormResult operator_norm(const DenseOperator& A, double rel_tol,
                                 int max_iter) {
  const std::size_t n = A.size();
  OperatorNormResult out;
  if (n == 0) return out;

  const Csr fwd = Csr::from(A, false);
  const Csr adj = Csr::from(A, true);
  if (fwd.val.empty()) return out;  // zero matrix

  DetRng rng(0x5eedF00dULL + n);
  auto random_vec = [&] {
    std::vector<Complex> v(n);
    for (auto& z : v) z = {rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
    return v;
  };

  // two-vector orthonormal block
  std::vector<std::vector<Complex>> X{random_vec(), random_vec()};
  auto orthonormalize = [&](std::vector<std::vector<Complex>>& B) {
    for (std::size_t i = 0; i < B.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) axpy(B[i], -dot(B[j], B[i]), B[j]);
      double nv = norm2(B[i]);
      if (nv < 1e-280) {
        B[i] = random_vec();
        for (std::size_t j = 0; j < i; ++j) axpy(B[i], -dot(B[j], B[i]), B[j]);
        nv = norm2(B[i]);
      }
      for (auto& z : B[i]) z /= nv;
    }
  };
  orthonormalize(X);

  std::vector<Complex> tmp(n), y0(n), y1(n);
  double theta_prev2 = 0.0, theta_prev = 0.0, theta = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    // Y_i = A* A X_i
    fwd.apply(X[0], tmp);
    adj.apply(tmp, y0);
    fwd.apply(X[1], tmp);
    adj.apply(tmp, y1);

    // Rayleigh-Ritz on span(X) with H = X^H Y (2x2 Hermitian PSD)
    const double h00 = dot_real(X[0], y0);
    const double h11 = dot_real(X[1], y1);
    const Complex h01 = dot(X[0], y1);
    const double tr = h00 + h11;
    const double disc = std::sqrt(std::max(
        0.0, (h00 - h11) * (h00 - h11) / 4.0 + std::norm(h01)));
    theta = tr / 2.0 + disc;

    out.iterations = it;
    const double step = std::abs(theta - theta_prev);
    out.residual = step / std::max(theta, 1e-300);
    if (it >= 3) {
      const double prev_step = std::abs(theta_prev - theta_prev2);
      if (step == 0.0) break;
      if (prev_step > 0.0) {
        const double r = std::min(step / prev_step, 0.999999);
        const double remainder = step * r / (1.0 - r);
        if (remainder <= rel_tol * std::max(theta, 1e-300) &&
            out.residual <= 1e-3) {
          // geometric-remainder extrapolation of the limit
          theta += remainder;
          break;
        }
      }
      if (out.residual <= 1e-15) break;  // stagnated at machine precision
    }
    if (it == max_iter)
      throw ConvergenceError("operator_norm: no convergence after " +
                             std::to_string(max_iter) + " iterations");

    X[0].swap(y0);
    X[1].swap(y1);
    orthonormalize(X);
    theta_prev2 = theta_prev;
    theta_prev = theta;
  }

  out.value = std::sqrt(std::max(theta, 0.0));
  return out;
}

}  // namespace treeshift
