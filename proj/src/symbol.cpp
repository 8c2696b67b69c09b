#include "treeshift/symbol.hpp"

#include <cmath>

#include "treeshift/errors.hpp"

namespace treeshift {

Symbol Symbol::finite(std::vector<Complex> coeffs) {
  Symbol s;
  s.kind_ = Kind::kFinite;
  while (!coeffs.empty() && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  s.coeffs_ = std::move(coeffs);
  return s;
}

Symbol Symbol::geometric(Complex a, Complex ratio) {
  Symbol s;
  s.kind_ = Kind::kGeometric;
  s.a_ = a;
  s.ratio_ = ratio;
  return s;
}

Symbol Symbol::indicator(int n) {
  if (n < 0) throw SpecFormatError("Symbol::indicator: negative index");
  Symbol s;
  s.kind_ = Kind::kIndicator;
  s.n_ = n;
  return s;
}

Complex Symbol::coeff(int k) const {
  if (k < 0) return 0.0;
  switch (kind_) {
    case Kind::kFinite:
      return std::size_t(k) < coeffs_.size() ? coeffs_[std::size_t(k)] : Complex(0.0);
    case Kind::kGeometric: {
      Complex acc = a_;
      for (int i = 0; i < k; ++i) acc *= ratio_;
      return acc;
    }
    case Kind::kIndicator:
      return k == n_ ? Complex(1.0) : Complex(0.0);
  }
  return 0.0;
}

std::optional<int> Symbol::support_bound() const {
  switch (kind_) {
    case Kind::kFinite:
      return coeffs_.empty() ? 0 : int(coeffs_.size()) - 1;
    case Kind::kGeometric:
      if (a_ == Complex(0.0) || ratio_ == Complex(0.0)) return 0;
      return std::nullopt;
    case Kind::kIndicator:
      return n_;
  }
  return 0;
}

std::optional<double> Symbol::decay_ratio() const {
  if (kind_ == Kind::kGeometric) return std::abs(ratio_);
  return std::nullopt;
}

int Symbol::effective_degree(double drop) const {
  if (auto b = support_bound()) return *b;
  // geometric with 0 < |ratio|: find where the tail is negligible
  const double r = std::abs(ratio_);
  if (r >= 1.0)
    throw DivergentSeriesError("effective_degree: geometric ratio not inside the disc");
  const int k = int(std::ceil(std::log(drop) / std::log(r)));
  return std::max(k, 0);
}

Complex Symbol::eval(Complex z) const {
  switch (kind_) {
    case Kind::kFinite: {
      Complex acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
      return acc;
    }
    case Kind::kGeometric: {
      const Complex rz = ratio_ * z;
      if (!(std::abs(rz) < 1.0))
        throw DivergentSeriesError("Symbol::eval: geometric series diverges at |rz|=" +
                                   std::to_string(std::abs(rz)));
      return a_ / (Complex(1.0) - rz);
    }
    case Kind::kIndicator: {
      Complex acc = 1.0;
      for (int i = 0; i < n_; ++i) acc *= z;
      return acc;
    }
  }
  return 0.0;
}

double Symbol::max_abs_coeff(int through) const {
  double m = 0.0;
  for (int k = 0; k <= through; ++k) m = std::max(m, std::abs(coeff(k)));
  return m;
}

Symbol cauchy_mult(const Symbol& f, const Symbol& g) {
  auto bf = f.support_bound(), bg = g.support_bound();
  if (!bf || !bg)
    throw DivergentSeriesError(
        "cauchy_mult: both factors must be finitely supported; "
        "use cauchy_mult_truncated for a prefix");
  return cauchy_mult_truncated(f, g, *bf + *bg);
}

Symbol cauchy_mult_truncated(const Symbol& f, const Symbol& g, int order) {
  if (order < 0) throw SpecFormatError("cauchy_mult_truncated: negative order");
  std::vector<Complex> out(std::size_t(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    KahanComplexSum s;
    for (int j = 0; j <= k; ++j) s.add(f.coeff(j) * g.coeff(k - j));
    out[std::size_t(k)] = s.value();
  }
  return Symbol::finite(std::move(out));
}

Symbol cesaro_symbol(const Symbol& f, int k) {
  if (k < 0) throw SpecFormatError("cesaro_symbol: negative order");
  std::vector<Complex> out(std::size_t(k) + 2, 0.0);
  for (int n = 0; n <= k + 1; ++n)
    out[std::size_t(n)] = f.coeff(n) * (double(k + 1 - n) / double(k + 1));
  return Symbol::finite(std::move(out));
}

Symbol truncate_symbol(const Symbol& f, int n, bool include_zero) {
  if (n < 0) throw SpecFormatError("truncate_symbol: negative cutoff");
  std::vector<Complex> out(std::size_t(n) + 1, 0.0);
  for (int k = include_zero ? 0 : 1; k <= n; ++k) out[std::size_t(k)] = f.coeff(k);
  return Symbol::finite(std::move(out));
}

}  // namespace treeshift
