#pragma once

// Truncated multivariate Taylor series ("jets").
//
// A jet of order k in n variables stores the Taylor coefficients
// c_m = (∂^m f)(x0) / m! for every multi-index m with |m| <= k. Monomials are
// kept in graded order (total degree, then descending lexicographic), so a
// lower-order truncation is a prefix of the coefficient array.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curv/errors.hpp"

namespace curv {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetDim = 6;

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

namespace detail {

struct ProductTerm {
  std::uint16_t lhs;
  std::uint16_t rhs;
};

// Monomial tables for one dimension, built once for order kMaxJetOrder.
struct JetLayout {
  int dim = 0;
  std::vector<MultiIndex> monomials;
  std::vector<int> degree;
  std::vector<double> factorial;  // m! = prod m_i!
  std::array<int, kMaxJetOrder + 2> prefix{};  // #monomials with degree < k
  // products_[start[r] .. start[r+1]) are all (i, j) with mono_i * mono_j = mono_r.
  std::vector<int> product_start;
  std::vector<ProductTerm> products;
  // shift[m * dim + v] = index of m + e_v, or -1 when the degree exceeds the max.
  std::vector<int> shift;

  int size(int order) const { return prefix[order + 1]; }

  int find(const MultiIndex& m) const {
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      if (monomials[i] == m) return static_cast<int>(i);
    }
    return -1;
  }
};

inline JetLayout build_layout(int dim) {
  JetLayout L;
  L.dim = dim;
  for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
    L.prefix[deg] = static_cast<int>(L.monomials.size());
    // Enumerate compositions of deg into dim parts, descending lexicographic.
    std::vector<MultiIndex> level;
    MultiIndex m{};
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == dim - 1) {
        m[var] = static_cast<std::uint8_t>(remaining);
        level.push_back(m);
        m[var] = 0;
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        m[var] = static_cast<std::uint8_t>(k);
        self(self, var + 1, remaining - k);
      }
      m[var] = 0;
    };
    rec(rec, 0, deg);
    for (const auto& x : level) {
      L.monomials.push_back(x);
      L.degree.push_back(deg);
      double f = 1.0;
      for (int v = 0; v < dim; ++v) {
        for (int k = 2; k <= x[v]; ++k) f *= k;
      }
      L.factorial.push_back(f);
    }
  }
  L.prefix[kMaxJetOrder + 1] = static_cast<int>(L.monomials.size());

  const int N = static_cast<int>(L.monomials.size());
  std::vector<std::vector<ProductTerm>> by_result(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (L.degree[i] + L.degree[j] > kMaxJetOrder) continue;
      MultiIndex s{};
      for (int v = 0; v < dim; ++v) s[v] = L.monomials[i][v] + L.monomials[j][v];
      by_result[L.find(s)].push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)});
    }
  }
  L.product_start.push_back(0);
  for (const auto& terms : by_result) {
    L.products.insert(L.products.end(), terms.begin(), terms.end());
    L.product_start.push_back(static_cast<int>(L.products.size()));
  }

  L.shift.assign(static_cast<std::size_t>(N) * dim, -1);
  for (int i = 0; i < N; ++i) {
    if (L.degree[i] == kMaxJetOrder) continue;
    for (int v = 0; v < dim; ++v) {
      MultiIndex s = L.monomials[i];
      ++s[v];
      L.shift[static_cast<std::size_t>(i) * dim + v] = L.find(s);
    }
  }
  return L;
}

inline const JetLayout& layout(int dim) {
  static const std::array<JetLayout, kMaxJetDim + 1> layouts = [] {
    std::array<JetLayout, kMaxJetDim + 1> out;
    for (int d = 1; d <= kMaxJetDim; ++d) out[d] = build_layout(d);
    return out;
  }();
  return layouts[dim];
}

}  // namespace detail

/// Number of coefficients of a jet: C(dim + order, order).
inline int jet_size(int dim, int order) { return detail::layout(dim).size(order); }

class Jet {
 public:
  Jet() = default;

  Jet(int dim, int order) : dim_(dim), order_(order) {
    check_shape(dim, order);
    coeffs_.assign(static_cast<std::size_t>(jet_size(dim, order)), 0.0);
  }

  static Jet constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.coeffs_[0] = value;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return coeffs_[0]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Multi-index of coefficient i in this jet's storage order.
  MultiIndex monomial(int i) const { return detail::layout(dim_).monomials[i]; }

  double coeff(const MultiIndex& m) const {
    const int i = index_of(m);
    return coeffs_[i];
  }
  void set_coeff(const MultiIndex& m, double v) { coeffs_[index_of(m)] = v; }

  /// Keeps the terms of degree <= order.
  Jet truncated(int order) const {
    if (order > order_ || order < 0) throw ArgumentError("cannot truncate a jet to a higher order");
    Jet out(dim_, order);
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
  }

  /// ∂/∂x^var as a jet of order - 1.
  Jet derivative(int var) const {
    if (order_ == 0) throw ArgumentError("cannot differentiate an order-0 jet");
    if (var < 0 || var >= dim_) throw ArgumentError("derivative variable out of range");
    const auto& L = detail::layout(dim_);
    Jet out(dim_, order_ - 1);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
      const int up = L.shift[i * dim_ + var];
      out.coeffs_[i] = coeffs_[up] * (L.monomials[i][var] + 1);
    }
    return out;
  }

  Jet& operator+=(const Jet& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    coeffs_[0] += s;
    return *this;
  }

  /// Adds a * b into this jet without allocating a temporary.
  void add_product(const Jet& a, const Jet& b, double scale = 1.0) {
    check_same(a);
    check_same(b);
    const auto& L = detail::layout(dim_);
    const int n = static_cast<int>(coeffs_.size());
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int t = L.product_start[r]; t < L.product_start[r + 1]; ++t) {
        s += a.coeffs_[L.products[t].lhs] * b.coeffs_[L.products[t].rhs];
      }
      coeffs_[r] += scale * s;
    }
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    return a += s;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.dim_, a.order_);
    out.add_product(a, b);
    return out;
  }

  // Solves b * q = a in graded order; the constant term of b must be nonzero.
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check_same(b);
    const double b0 = b.coeffs_[0];
    if (b0 == 0.0 || !std::isfinite(b0)) {
      throw SingularPointError("division by a jet with zero constant term");
    }
    const auto& L = detail::layout(a.dim_);
    Jet q(a.dim_, a.order_);
    const int n = static_cast<int>(q.coeffs_.size());
    for (int r = 0; r < n; ++r) {
      double s = a.coeffs_[r];
      for (int t = L.product_start[r]; t < L.product_start[r + 1]; ++t) {
        const auto [i, j] = L.products[t];
        if (i == 0) continue;  // the b0 * q_r term being solved for
        s -= b.coeffs_[i] * q.coeffs_[j];
      }
      q.coeffs_[r] = s / b0;
    }
    return q;
  }

  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& b) { return Jet::constant(b.dim_, b.order_, s) / b; }

  friend bool operator==(const Jet&, const Jet&) = default;

  void check_same(const Jet& o) const {
    if (dim_ != o.dim_ || order_ != o.order_) {
      throw ArgumentError("jet operands disagree in dimension or order");
    }
  }

 private:
  static void check_shape(int dim, int order) {
    if (dim < 1 || dim > kMaxJetDim) throw ArgumentError("jet dimension must be in 1..6");
    if (order < 0 || order > kMaxJetOrder) throw ArgumentError("jet order must be in 0..4");
  }

  int index_of(const MultiIndex& m) const {
    int deg = 0;
    for (int v = dim_; v < kMaxJetDim; ++v) {
      if (m[v] != 0) throw ArgumentError("multi-index has entries beyond the jet dimension");
    }
    for (int v = 0; v < dim_; ++v) deg += m[v];
    if (deg > order_) throw ArgumentError("multi-index degree exceeds the jet order");
    const auto& L = detail::layout(dim_);
    for (int i = L.prefix[deg]; i < L.prefix[deg + 1]; ++i) {
      if (L.monomials[i] == m) return i;
    }
    throw ArgumentError("multi-index not found");
  }

  int dim_ = 1;
  int order_ = 0;
  std::vector<double> coeffs_ = {0.0};
};

/// Builds a multi-index from a short list, e.g. multi_index({1, 1}).
inline MultiIndex multi_index(std::initializer_list<int> parts) {
  MultiIndex m{};
  int v = 0;
  for (int p : parts) {
    if (v >= kMaxJetDim || p < 0) throw ArgumentError("bad multi-index");
    m[v++] = static_cast<std::uint8_t>(p);
  }
  return m;
}

/// Jet of the coordinate function x^index around a point where x^index = value.
inline Jet jet_variable(int dim, int order, int index, double value) {
  if (index < 0 || index >= dim) throw ArgumentError("jet variable index out of range");
  Jet j = Jet::constant(dim, order, value);
  if (order >= 1) {
    MultiIndex m{};
    m[index] = 1;
    j.set_coeff(m, 1.0);
  }
  return j;
}

enum class ArithOp { Add, Sub, Mul, Div };

inline Jet jet_arith(const Jet& a, const Jet& b, ArithOp op) {
  a.check_same(b);
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  throw ArgumentError("unknown arithmetic op");
}

/// The true partial derivative: Taylor coefficient times m!.
inline double extract_partial(const Jet& a, const MultiIndex& m) {
  const auto& L = detail::layout(a.dim());
  return a.coeff(m) * L.factorial[L.find(m)];
}

enum class Elementary { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, PowConst };

namespace detail {

// f(x0 + h) = sum_k f^(k)(x0) / k! h^k with h the non-constant part of a.
inline Jet compose(const Jet& a, const std::array<double, kMaxJetOrder + 1>& derivs) {
  Jet h = a;
  h.coeffs()[0] = 0.0;
  Jet out = Jet::constant(a.dim(), a.order(), derivs[0]);
  Jet power = Jet::constant(a.dim(), a.order(), 1.0);
  double inv_fact = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    power = power * h;
    inv_fact /= k;
    const double c = derivs[k] * inv_fact;
    if (c == 0.0) continue;
    auto oc = out.coeffs();
    auto pc = power.coeffs();
    for (std::size_t i = 0; i < oc.size(); ++i) oc[i] += c * pc[i];
  }
  return out;
}

inline std::array<double, kMaxJetOrder + 1> pow_derivatives(double x, double r) {
  std::array<double, kMaxJetOrder + 1> d{};
  double falling = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = falling == 0.0 ? 0.0 : falling * std::pow(x, r - k);
    falling *= (r - k);
  }
  return d;
}

}  // namespace detail

/// Composes an elementary function with a jet. `exponent` is used by PowConst.
inline Jet jet_elementary(const Jet& a, Elementary fn, double exponent = 1.0) {
  const double x = a.value();
  std::array<double, kMaxJetOrder + 1> d{};
  switch (fn) {
    case Elementary::Sin: {
      const double s = std::sin(x), c = std::cos(x);
      d = {s, c, -s, -c, s};
      break;
    }
    case Elementary::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      d = {c, -s, -c, s, c};
      break;
    }
    case Elementary::Tan: {
      const double c = std::cos(x);
      if (std::abs(c) < 1e-14) throw SingularPointError("tan evaluated at a pole");
      const double t = std::tan(x);
      const double s = 1.0 + t * t;
      d = {t, s, 2.0 * t * s, s * (2.0 + 6.0 * t * t), s * (16.0 * t + 24.0 * t * t * t)};
      break;
    }
    case Elementary::Exp: {
      const double e = std::exp(x);
      d = {e, e, e, e, e};
      break;
    }
    case Elementary::Log: {
      if (!(x > 0.0)) throw SingularPointError("log of a non-positive value");
      d = {std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x)};
      break;
    }
    case Elementary::Sqrt: {
      if (!(x > 0.0)) throw SingularPointError("sqrt of a non-positive value");
      d = detail::pow_derivatives(x, 0.5);
      break;
    }
    case Elementary::Sinh: {
      const double s = std::sinh(x), c = std::cosh(x);
      d = {s, c, s, c, s};
      break;
    }
    case Elementary::Cosh: {
      const double s = std::sinh(x), c = std::cosh(x);
      d = {c, s, c, s, c};
      break;
    }
    case Elementary::Tanh: {
      const double t = std::tanh(x);
      const double s = 1.0 - t * t;
      d = {t, s, -2.0 * t * s, s * (-2.0 + 6.0 * t * t), s * (16.0 * t - 24.0 * t * t * t)};
      break;
    }
    case Elementary::PowConst: {
      const bool integral = std::floor(exponent) == exponent;
      if (!integral && !(x > 0.0)) {
        throw SingularPointError("non-integer power of a non-positive value");
      }
      if (x == 0.0 && exponent < 0.0) throw SingularPointError("negative power of zero");
      d = detail::pow_derivatives(x, exponent);
      break;
    }
  }
  return detail::compose(a, d);
}

inline Jet sin(const Jet& a) { return jet_elementary(a, Elementary::Sin); }
inline Jet cos(const Jet& a) { return jet_elementary(a, Elementary::Cos); }
inline Jet tan(const Jet& a) { return jet_elementary(a, Elementary::Tan); }
inline Jet exp(const Jet& a) { return jet_elementary(a, Elementary::Exp); }
inline Jet log(const Jet& a) { return jet_elementary(a, Elementary::Log); }
inline Jet sqrt(const Jet& a) { return jet_elementary(a, Elementary::Sqrt); }
inline Jet sinh(const Jet& a) { return jet_elementary(a, Elementary::Sinh); }
inline Jet cosh(const Jet& a) { return jet_elementary(a, Elementary::Cosh); }
inline Jet tanh(const Jet& a) { return jet_elementary(a, Elementary::Tanh); }
inline Jet pow_const(const Jet& a, double r) { return jet_elementary(a, Elementary::PowConst, r); }

/// Integer power by repeated squaring; negative exponents divide.
inline Jet pow_int(const Jet& a, int k) {
  if (k < 0) return 1.0 / pow_int(a, -k);
  Jet result = Jet::constant(a.dim(), a.order(), 1.0);
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace curv
