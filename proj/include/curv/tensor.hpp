#pragma once

// Dense tensor values at a point with an explicit valence (one variance per
// slot). Storage is row-major over dim^rank entries.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "curv/errors.hpp"

namespace curv {

enum class Variance : std::uint8_t { Covariant, Contravariant };

using Valence = std::vector<Variance>;

inline constexpr int kMaxRank = 8;
using Index = std::array<int, kMaxRank>;

inline Valence covariant(int rank) { return Valence(static_cast<std::size_t>(rank), Variance::Covariant); }

/// `lower` covariant slots followed by `upper` contravariant ones.
inline Valence valence_of(int lower, int upper) {
  Valence v = covariant(lower);
  v.insert(v.end(), static_cast<std::size_t>(upper), Variance::Contravariant);
  return v;
}

class TensorValue {
 public:
  TensorValue() = default;

  TensorValue(int dim, Valence valence) : dim_(dim), valence_(std::move(valence)) {
    if (dim < 1) throw ArgumentError("tensor dimension must be positive");
    if (rank() > kMaxRank) throw ArgumentError("tensor rank too large");
    std::size_t n = 1;
    for (int i = 0; i < rank(); ++i) n *= static_cast<std::size_t>(dim);
    data_.assign(n, 0.0);
  }

  /// Fills each component from f(const Index&).
  template <class F>
  static TensorValue generate(int dim, Valence valence, F&& f) {
    TensorValue t(dim, std::move(valence));
    Index idx{};
    const int r = t.rank();
    for (std::size_t flat = 0; flat < t.data_.size(); ++flat) {
      t.data_[flat] = f(static_cast<const Index&>(idx));
      for (int s = r - 1; s >= 0; --s) {
        if (++idx[s] < dim) break;
        idx[s] = 0;
      }
    }
    return t;
  }

  static TensorValue scalar(int dim, double v) {
    TensorValue t(dim, {});
    t.data_[0] = v;
    return t;
  }

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  const Valence& valence() const { return valence_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::size_t size() const { return data_.size(); }

  std::size_t flat(const Index& idx) const {
    std::size_t f = 0;
    for (int s = 0; s < rank(); ++s) f = f * dim_ + idx[s];
    return f;
  }

  Index unflatten(std::size_t f) const {
    Index idx{};
    for (int s = rank() - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(f % dim_);
      f /= dim_;
    }
    return idx;
  }

  double at(const Index& idx) const { return data_[flat(idx)]; }
  double& at(const Index& idx) { return data_[flat(idx)]; }

  template <class... I>
  double operator()(I... i) const {
    return data_[offset(i...)];
  }
  template <class... I>
  double& operator()(I... i) {
    return data_[offset(i...)];
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  TensorValue& operator+=(const TensorValue& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  TensorValue& operator-=(const TensorValue& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  TensorValue& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(TensorValue a, double s) { return a *= s; }
  friend TensorValue operator*(double s, TensorValue a) { return a *= s; }

  void check_same_shape(const TensorValue& o) const {
    if (dim_ != o.dim_ || valence_ != o.valence_) throw ArgumentError("tensor shapes differ");
  }

 private:
  template <class... I>
  std::size_t offset(I... i) const {
    std::size_t f = 0;
    ((f = f * dim_ + static_cast<std::size_t>(i)), ...);
    return f;
  }

  int dim_ = 1;
  Valence valence_;
  std::vector<double> data_ = {0.0};
};

/// Largest |a - b| over all components.
inline double max_abs_diff(const TensorValue& a, const TensorValue& b) {
  a.check_same_shape(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

/// Reorders slots: slot i of the result is slot perm[i] of t.
inline TensorValue permute(const TensorValue& t, std::span<const int> perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw ArgumentError("permutation length differs from rank");
  Valence v(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) v[i] = t.valence()[perm[i]];
  return TensorValue::generate(t.dim(), v, [&](const Index& j) {
    Index src{};
    for (int i = 0; i < r; ++i) src[perm[i]] = j[i];
    return t.at(src);
  });
}

inline TensorValue permute(const TensorValue& t, std::initializer_list<int> perm) {
  return permute(t, std::span<const int>(perm.begin(), perm.size()));
}

/// Trace over one covariant and one contravariant slot.
inline TensorValue contract(const TensorValue& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a < 0 || slot_a >= r || slot_b < 0 || slot_b >= r) throw ArgumentError("contraction slot out of range");
  if (slot_a == slot_b) throw ArgumentError("cannot contract a slot with itself");
  if (t.valence()[slot_a] == t.valence()[slot_b]) {
    throw ArgumentError("contraction needs one covariant and one contravariant slot; raise or lower first");
  }
  Valence v;
  std::vector<int> keep;
  for (int s = 0; s < r; ++s) {
    if (s != slot_a && s != slot_b) {
      v.push_back(t.valence()[s]);
      keep.push_back(s);
    }
  }
  return TensorValue::generate(t.dim(), v, [&](const Index& j) {
    Index src{};
    for (std::size_t i = 0; i < keep.size(); ++i) src[keep[i]] = j[i];
    double s = 0.0;
    for (int k = 0; k < t.dim(); ++k) {
      src[slot_a] = k;
      src[slot_b] = k;
      s += t.at(src);
    }
    return s;
  });
}

/// Metric and inverse metric at one point.
struct MetricAtPoint {
  TensorValue g;      // (0,2)
  TensorValue g_inv;  // (2,0)
  std::string signature;

  int dim() const { return g.dim(); }

  static MetricAtPoint from_components(int dim, std::span<const double> g_rowmajor) {
    Eigen::MatrixXd G(dim, dim);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) G(a, b) = g_rowmajor[a * dim + b];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible() || std::abs(lu.determinant()) <= 1e-12) {
      throw SingularPointError("metric is not invertible at this point");
    }
    const Eigen::MatrixXd Gi = lu.inverse();
    MetricAtPoint m;
    m.g = TensorValue::generate(dim, covariant(2), [&](const Index& i) { return G(i[0], i[1]); });
    m.g_inv = TensorValue::generate(dim, valence_of(0, 2), [&](const Index& i) { return Gi(i[0], i[1]); });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
    m.signature = "(";
    for (int i = 0; i < dim; ++i) m.signature += eig.eigenvalues()(i) < 0 ? '-' : '+';
    m.signature += ")";
    return m;
  }
};

/// Flips the variance of one slot using g (to lower) or g^-1 (to raise).
inline TensorValue raise_lower(const TensorValue& t, int slot, const MetricAtPoint& m) {
  if (slot < 0 || slot >= t.rank()) throw ArgumentError("slot out of range");
  if (m.dim() != t.dim()) throw ArgumentError("metric dimension differs from tensor dimension");
  Valence v = t.valence();
  const bool lowering = v[slot] == Variance::Contravariant;
  v[slot] = lowering ? Variance::Covariant : Variance::Contravariant;
  const TensorValue& M = lowering ? m.g : m.g_inv;
  return TensorValue::generate(t.dim(), v, [&](const Index& j) {
    Index src = j;
    double s = 0.0;
    for (int k = 0; k < t.dim(); ++k) {
      src[slot] = k;
      s += M(j[slot], k) * t.at(src);
    }
    return s;
  });
}

namespace detail {

inline void check_slots(const TensorValue& t, std::span<const int> slots) {
  for (int s : slots) {
    if (s < 0 || s >= t.rank()) throw ArgumentError("slot out of range");
    if (t.valence()[s] != t.valence()[slots[0]]) throw ArgumentError("listed slots must share variance");
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      if (slots[i] == slots[j]) throw ArgumentError("slots must be distinct");
    }
  }
}

inline int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
  }
  return inversions % 2 ? -1 : 1;
}

inline TensorValue average_over_permutations(const TensorValue& t, std::span<const int> slots, bool signed_sum) {
  check_slots(t, slots);
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> perms;
  do {
    perms.emplace_back(perm, signed_sum ? permutation_sign(perm) : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double inv = 1.0 / static_cast<double>(perms.size());
  return TensorValue::generate(t.dim(), t.valence(), [&](const Index& j) {
    double s = 0.0;
    Index src = j;
    for (const auto& [p, sign] : perms) {
      for (std::size_t i = 0; i < slots.size(); ++i) src[slots[i]] = j[slots[p[i]]];
      s += sign * t.at(src);
    }
    return s * inv;
  });
}

}  // namespace detail

/// Sum over cyclic rotations of the listed slots: K_(abc) = K_abc + K_bca + K_cab.
inline TensorValue cyclic_sum(const TensorValue& t, std::span<const int> slots) {
  if (slots.size() < 3 || slots.size() > 4) throw ArgumentError("cyclic sums take 3 or 4 slots");
  detail::check_slots(t, slots);
  const int k = static_cast<int>(slots.size());
  return TensorValue::generate(t.dim(), t.valence(), [&](const Index& j) {
    double s = 0.0;
    Index src = j;
    for (int r = 0; r < k; ++r) {
      for (int i = 0; i < k; ++i) src[slots[i]] = j[slots[(i + r) % k]];
      s += t.at(src);
    }
    return s;
  });
}

inline TensorValue cyclic_sum(const TensorValue& t, std::initializer_list<int> slots) {
  return cyclic_sum(t, std::span<const int>(slots.begin(), slots.size()));
}

/// Signed average over all permutations of the listed slots.
inline TensorValue antisymmetrize(const TensorValue& t, std::span<const int> slots) {
  return detail::average_over_permutations(t, slots, true);
}
inline TensorValue antisymmetrize(const TensorValue& t, std::initializer_list<int> slots) {
  return antisymmetrize(t, std::span<const int>(slots.begin(), slots.size()));
}

/// Unsigned average over all permutations of the listed slots.
inline TensorValue symmetrize(const TensorValue& t, std::span<const int> slots) {
  return detail::average_over_permutations(t, slots, false);
}
inline TensorValue symmetrize(const TensorValue& t, std::initializer_list<int> slots) {
  return symmetrize(t, std::span<const int>(slots.begin(), slots.size()));
}

/// Generalized Kronecker delta δ^{da}_{cb} = δ^a_b δ^d_c − δ^a_c δ^d_b, slots (d, a, c, b).
inline TensorValue gen_kronecker(int dim) {
  if (dim < 2) throw ArgumentError("generalized Kronecker delta needs dim >= 2");
  const Valence v{Variance::Contravariant, Variance::Contravariant, Variance::Covariant, Variance::Covariant};
  return TensorValue::generate(dim, v, [](const Index& i) {
                                 const int d = i[0], a = i[1], c = i[2], b = i[3];
                                 return double((a == b) * (d == c)) - double((a == c) * (d == b));
                               });
}

/// Identity (1,1) tensor δ_a^b with slots (a, b).
inline TensorValue kronecker(int dim) {
  return TensorValue::generate(dim, Valence{Variance::Covariant, Variance::Contravariant},
                               [](const Index& i) { return i[0] == i[1] ? 1.0 : 0.0; });
}

}  // namespace curv
