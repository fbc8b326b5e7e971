#pragma once

// Tensor fields near a point: every component is a jet. Covariant
// derivatives lower the jet order by one and prepend a covariant slot.

#include <vector>

#include "curv/errors.hpp"
#include "curv/jet.hpp"
#include "curv/tensor.hpp"

namespace curv {

class JetTensor {
 public:
  JetTensor() = default;

  JetTensor(int dim, Valence valence, int order) : dim_(dim), order_(order), valence_(std::move(valence)) {
    if (rank() > kMaxRank) throw ArgumentError("tensor rank too large");
    std::size_t n = 1;
    for (int i = 0; i < rank(); ++i) n *= static_cast<std::size_t>(dim);
    comps_.assign(n, Jet(dim, order));
  }

  template <class F>
  static JetTensor generate(int dim, Valence valence, int order, F&& f) {
    JetTensor t(dim, std::move(valence), order);
    Index idx{};
    const int r = t.rank();
    for (std::size_t flat = 0; flat < t.comps_.size(); ++flat) {
      t.comps_[flat] = f(static_cast<const Index&>(idx));
      for (int s = r - 1; s >= 0; --s) {
        if (++idx[s] < dim) break;
        idx[s] = 0;
      }
    }
    return t;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  const Valence& valence() const { return valence_; }
  std::size_t size() const { return comps_.size(); }

  std::size_t flat(const Index& idx) const {
    std::size_t f = 0;
    for (int s = 0; s < rank(); ++s) f = f * dim_ + idx[s];
    return f;
  }

  const Jet& at(const Index& idx) const { return comps_[flat(idx)]; }
  Jet& at(const Index& idx) { return comps_[flat(idx)]; }
  const Jet& at_flat(std::size_t f) const { return comps_[f]; }
  Jet& at_flat(std::size_t f) { return comps_[f]; }

  template <class... I>
  const Jet& operator()(I... i) const {
    std::size_t f = 0;
    ((f = f * dim_ + static_cast<std::size_t>(i)), ...);
    return comps_[f];
  }

  /// Component values at the expansion point.
  TensorValue value() const {
    TensorValue v(dim_, valence_);
    for (std::size_t i = 0; i < comps_.size(); ++i) v.data()[i] = comps_[i].value();
    return v;
  }

  JetTensor truncated(int order) const {
    if (order == order_) return *this;
    JetTensor out(dim_, valence_, order);
    for (std::size_t i = 0; i < comps_.size(); ++i) out.comps_[i] = comps_[i].truncated(order);
    return out;
  }

  /// Partial derivative ∂_var of every component (order drops by one).
  JetTensor partial(int var) const {
    JetTensor out(dim_, valence_, order_ - 1);
    for (std::size_t i = 0; i < comps_.size(); ++i) out.comps_[i] = comps_[i].derivative(var);
    return out;
  }

 private:
  int dim_ = 1;
  int order_ = 0;
  Valence valence_;
  std::vector<Jet> comps_;
};

/// ∇_e T with e prepended. `gamma` holds Γ^d_bc in slots (b, c, d) and must
/// carry at least order t.order() - 1.
inline JetTensor covariant_derivative(const JetTensor& t, const JetTensor& gamma) {
  if (t.order() < 1) throw ArgumentError("covariant derivative needs a jet of order >= 1");
  if (gamma.order() < t.order() - 1) throw ArgumentError("connection jet order too low");
  const int n = t.dim();
  const int r = t.rank();
  const int out_order = t.order() - 1;
  const JetTensor G = gamma.truncated(out_order);
  std::vector<JetTensor> dT;
  dT.reserve(n);
  for (int e = 0; e < n; ++e) dT.push_back(t.partial(e));
  const JetTensor T = t.truncated(out_order);

  Valence v = t.valence();
  v.insert(v.begin(), Variance::Covariant);
  return JetTensor::generate(n, v, out_order, [&](const Index& j) {
    const int e = j[0];
    Index src{};
    for (int s = 0; s < r; ++s) src[s] = j[s + 1];
    Jet acc = dT[e].at(src);
    for (int s = 0; s < r; ++s) {
      const int orig = src[s];
      const bool up = t.valence()[s] == Variance::Contravariant;
      for (int k = 0; k < n; ++k) {
        src[s] = k;
        // contravariant: +Γ^{orig}_{ek} T^{..k..}; covariant: −Γ^k_{e,orig} T_{..k..}
        if (up) {
          acc.add_product(G(e, k, orig), T.at(src));
        } else {
          acc.add_product(G(e, orig, k), T.at(src), -1.0);
        }
      }
      src[s] = orig;
    }
    return acc;
  });
}

/// Inverse of a square matrix of jets by Gauss-Jordan elimination, pivoting
/// on the constant terms.
inline std::vector<Jet> jet_inverse(int n, std::vector<Jet> a) {
  if (static_cast<int>(a.size()) != n * n) throw ArgumentError("jet matrix has the wrong size");
  const int dim = a.front().dim();
  const int order = a.front().order();
  std::vector<Jet> inv(static_cast<std::size_t>(n) * n, Jet(dim, order));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Jet::constant(dim, order, 1.0);
  double scale = 0.0;
  for (const auto& x : a) scale = std::max(scale, std::abs(x.value()));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row * n + col].value()) > std::abs(a[piv * n + col].value())) piv = row;
    }
    if (std::abs(a[piv * n + col].value()) <= 1e-14 * std::max(1.0, scale)) {
      throw SingularPointError("metric is not invertible at this point");
    }
    if (piv != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[piv * n + k], a[col * n + k]);
        std::swap(inv[piv * n + k], inv[col * n + k]);
      }
    }
    const Jet p_inv = 1.0 / a[col * n + col];
    for (int k = 0; k < n; ++k) {
      a[col * n + k] = a[col * n + k] * p_inv;
      inv[col * n + k] = inv[col * n + k] * p_inv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet f = a[row * n + col];
      for (int k = 0; k < n; ++k) {
        a[row * n + k].add_product(f, a[col * n + k], -1.0);
        inv[row * n + k].add_product(f, inv[col * n + k], -1.0);
      }
    }
  }
  return inv;
}

}  // namespace curv
