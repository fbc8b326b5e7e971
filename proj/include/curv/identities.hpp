#pragma once

// Numbered curvature identities as signed sums of tensor terms. A residual
// is the largest component of the sum; `scale` is the largest component of
// any single term.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curv/curvature.hpp"
#include "curv/errors.hpp"
#include "curv/k_tensors.hpp"
#include "curv/tensor.hpp"

namespace curv {

enum class IdentityKind {
  Veblen1,
  Walker2,
  Lichnerowicz3,
  Main4,
  CorollaryU,
  Lovelock6,
  KLovelock7,
  DivVeblen8,
  DivDiv9,
  AlgRRR10,
  AlgRR11,
  AlgRRRR12,
  Tachibana,
  RicciPseudo,
};

inline constexpr std::string_view identity_kind_name(IdentityKind k) {
  switch (k) {
    case IdentityKind::Veblen1: return "Veblen1";
    case IdentityKind::Walker2: return "Walker2";
    case IdentityKind::Lichnerowicz3: return "Lichnerowicz3";
    case IdentityKind::Main4: return "Main4";
    case IdentityKind::CorollaryU: return "CorollaryU";
    case IdentityKind::Lovelock6: return "Lovelock6";
    case IdentityKind::KLovelock7: return "KLovelock7";
    case IdentityKind::DivVeblen8: return "DivVeblen8";
    case IdentityKind::DivDiv9: return "DivDiv9";
    case IdentityKind::AlgRRR10: return "AlgRRR10";
    case IdentityKind::AlgRR11: return "AlgRR11";
    case IdentityKind::AlgRRRR12: return "AlgRRRR12";
    case IdentityKind::Tachibana: return "Tachibana";
    case IdentityKind::RicciPseudo: return "RicciPseudo";
  }
  return "?";
}

inline constexpr IdentityKind kAllIdentityKinds[] = {
    IdentityKind::Veblen1,    IdentityKind::Walker2,    IdentityKind::Lichnerowicz3, IdentityKind::Main4,
    IdentityKind::CorollaryU, IdentityKind::Lovelock6,  IdentityKind::KLovelock7,    IdentityKind::DivVeblen8,
    IdentityKind::DivDiv9,    IdentityKind::AlgRRR10,   IdentityKind::AlgRR11,       IdentityKind::AlgRRRR12,
    IdentityKind::Tachibana,  IdentityKind::RicciPseudo,
};

struct IdentityId {
  IdentityKind kind = IdentityKind::Veblen1;
  std::optional<KKind> k;  // KLovelock7 only

  IdentityId() = default;
  IdentityId(IdentityKind kind_) : kind(kind_) {  // NOLINT(google-explicit-constructor)
    if (kind == IdentityKind::KLovelock7) k = KKind::projective();
  }
  IdentityId(IdentityKind kind_, KKind k_) : kind(kind_), k(k_) {}

  static IdentityId k_lovelock(KKind kind) { return {IdentityKind::KLovelock7, kind}; }

  /// "Main4", "KLovelock7:conformal", "KLovelock7:quasi:1:0.5".
  std::string name() const {
    std::string s(identity_kind_name(kind));
    if (kind == IdentityKind::KLovelock7) s += ":" + k->name();
    return s;
  }

  static IdentityId parse(const std::string& text) {
    for (IdentityKind kd : kAllIdentityKinds) {
      const std::string base(identity_kind_name(kd));
      if (kd == IdentityKind::KLovelock7) {
        if (text == base) return IdentityId(kd);
        if (text.rfind(base + ":", 0) == 0) return k_lovelock(KKind::parse(text.substr(base.size() + 1)));
      } else if (text == base) {
        return IdentityId(kd);
      }
    }
    throw ArgumentError("unknown identity '" + text + "'");
  }

  friend bool operator==(const IdentityId&, const IdentityId&) = default;
};

/// Identities that hold on every Levi-Civita connection, in report order.
inline std::vector<IdentityId> universal_identities(const std::vector<KKind>& kinds = KKind::all()) {
  std::vector<IdentityId> out{IdentityKind::Veblen1, IdentityKind::Walker2, IdentityKind::Main4,
                              IdentityKind::Lovelock6};
  for (const auto& k : kinds) out.push_back(IdentityId::k_lovelock(k));
  out.push_back(IdentityKind::DivVeblen8);
  out.push_back(IdentityKind::DivDiv9);
  return out;
}

/// Every identity in enum order, with KLovelock7 expanded over `kinds`.
inline std::vector<IdentityId> all_identities(const std::vector<KKind>& kinds = KKind::all()) {
  std::vector<IdentityId> out;
  for (IdentityKind kd : kAllIdentityKinds) {
    if (kd == IdentityKind::KLovelock7) {
      for (const auto& k : kinds) out.push_back(IdentityId::k_lovelock(k));
    } else {
      out.push_back(kd);
    }
  }
  return out;
}

struct Residual {
  IdentityId id;
  bool applicable = true;
  std::string note;
  double max_abs = 0.0;
  double scale = 0.0;
  double relative = 0.0;
  std::vector<int> worst_index;
  int terms = 0;
};

struct SignedTerm {
  double sign = 1.0;
  TensorValue value;
};

struct IdentityTerms {
  bool applicable = true;
  std::string note;
  std::vector<SignedTerm> terms;
};

inline constexpr double kRicciFlatThreshold = 1e-8;
inline constexpr double kDegenerateNorm = 1e-10;

/// Q(g,R)_cdefab with slots (c,d,e,f,a,b).
inline TensorValue tachibana(const CurvaturePoint& cp) {
  const TensorValue& g = cp.metric.g;
  const TensorValue& R = cp.riemann_low;
  return TensorValue::generate(cp.dim(), covariant(6), [&](const Index& i) {
    const int c = i[0], d = i[1], e = i[2], f = i[3], a = i[4], b = i[5];
    return -g(c, b) * R(a, d, e, f) + g(c, a) * R(b, d, e, f) - g(d, b) * R(c, a, e, f) + g(d, a) * R(c, b, e, f) -
           g(e, b) * R(c, d, a, f) + g(e, a) * R(c, d, b, f) - g(f, b) * R(c, d, e, a) + g(f, a) * R(c, d, e, b);
  });
}

/// Least-squares fit of [∇_a,∇_b] R_cdef = L_R Q(g,R)_cdefab.
struct TachibanaFit {
  TensorValue commutator;  // [∇_a,∇_b] R_cdef, slots (a,b,c,d,e,f)
  TensorValue q;           // Q(g,R) permuted to slots (a,b,c,d,e,f)
  double l_r = 0.0;
  double q_norm = 0.0;
  bool degenerate = false;
};

namespace detail {

// ∇_f ∇_e R_abcd with the last slot lowered; slots (f,e,a,b,c,d).
inline TensorValue nabla2_riemann_low(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue& N2 = cp.nabla2_riemann;
  const TensorValue& g = cp.metric.g;
  return TensorValue::generate(n, covariant(6), [&](const Index& i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += N2(i[0], i[1], i[2], i[3], i[4], k) * g(k, i[5]);
    return s;
  });
}

// [∇_a,∇_b] R_cdef from second derivatives; slots (a,b,c,d,e,f).
inline TensorValue riemann_commutator(const TensorValue& n2low) {
  return TensorValue::generate(n2low.dim(), covariant(6), [&](const Index& i) {
    Index j = i;
    std::swap(j[0], j[1]);
    return n2low.at(i) - n2low.at(j);
  });
}

}  // namespace detail

inline TachibanaFit tachibana_fit(const CurvaturePoint& cp) {
  TachibanaFit fit;
  fit.commutator = detail::riemann_commutator(detail::nabla2_riemann_low(cp));
  fit.q = permute(tachibana(cp), {4, 5, 0, 1, 2, 3});
  fit.q_norm = fit.q.norm();
  fit.degenerate = fit.q_norm <= kDegenerateNorm;
  if (!fit.degenerate) {
    double dot = 0.0;
    for (std::size_t i = 0; i < fit.q.size(); ++i) dot += fit.commutator.data()[i] * fit.q.data()[i];
    fit.l_r = dot / (fit.q_norm * fit.q_norm);
  }
  return fit;
}

namespace detail {

inline TensorValue gen(int n, int rank, const auto& f) {
  return TensorValue::generate(n, covariant(rank), f);
}

// ∇_a ∇_m R_bce^m, slots (a,b,c,e).
inline TensorValue nabla_div_riemann(const TensorValue& N2) {
  const int n = N2.dim();
  return gen(n, 4, [&](const Index& i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += N2(i[0], m, i[1], i[2], i[3], m);
    return s;
  });
}

// ∇_a ∇_b R_cd, slots (a,b,c,d).
inline TensorValue nabla2_ricci(const CurvaturePoint& cp) {
  const int n = cp.dim();
  return gen(n, 4, [&](const Index& i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += cp.nabla2_riemann(i[0], i[1], i[2], m, i[3], m);
    return s;
  });
}

// R_xm R_yzw^m
inline double ric_riem(const CurvaturePoint& cp, int x, int y, int z, int w) {
  double s = 0.0;
  for (int m = 0; m < cp.dim(); ++m) s += cp.ricci(x, m) * cp.riemann(y, z, w, m);
  return s;
}

inline std::vector<SignedTerm> main_rhs_terms(const CurvaturePoint& cp, double sign) {
  const int n = cp.dim();
  const TensorValue& R = cp.riemann;
  auto rr = [&](int a, int b, int c, int d, int e, int f) {
    // R_abc^m R_dme^f
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += R(a, b, c, m) * R(d, m, e, f);
    return s;
  };
  Valence v = valence_of(5, 1);
  auto mk = [&](auto&& f) { return TensorValue::generate(n, v, f); };
  std::vector<SignedTerm> t;
  t.push_back({sign, mk([&](const Index& i) { return rr(i[0], i[1], i[2], i[3], i[4], i[5]); })});
  t.push_back({sign, mk([&](const Index& i) { return rr(i[1], i[2], i[3], i[0], i[4], i[5]); })});
  t.push_back({sign, mk([&](const Index& i) { return rr(i[2], i[3], i[0], i[1], i[4], i[5]); })});
  t.push_back({sign, mk([&](const Index& i) { return rr(i[3], i[0], i[1], i[2], i[4], i[5]); })});
  // −R_ace^m R_bdm^f
  t.push_back({-sign, mk([&](const Index& i) {
                 double s = 0.0;
                 for (int m = 0; m < n; ++m) s += R(i[0], i[2], i[4], m) * R(i[1], i[3], m, i[5]);
                 return s;
               })});
  // +R_acm^f R_bde^m
  t.push_back({sign, mk([&](const Index& i) {
                 double s = 0.0;
                 for (int m = 0; m < n; ++m) s += R(i[0], i[2], m, i[5]) * R(i[1], i[3], i[4], m);
                 return s;
               })});
  return t;
}

// R_am R_bce^m + R_bm R_cae^m + R_cm R_abe^m, times `factor`
inline std::vector<SignedTerm> lovelock_rhs_terms(const CurvaturePoint& cp, double sign, double factor) {
  const int n = cp.dim();
  Valence v = valence_of(4, 0);
  std::vector<SignedTerm> t;
  t.push_back({sign, TensorValue::generate(n, v, [&](const Index& i) {
                 return factor * ric_riem(cp, i[0], i[1], i[2], i[3]);
               })});
  t.push_back({sign, TensorValue::generate(n, v, [&](const Index& i) {
                 return factor * ric_riem(cp, i[1], i[2], i[0], i[3]);
               })});
  t.push_back({sign, TensorValue::generate(n, v, [&](const Index& i) {
                 return factor * ric_riem(cp, i[2], i[0], i[1], i[3]);
               })});
  return t;
}

// R_am R_bec^m − R_bm R_ace^m + R_cm R_eba^m − R_em R_cab^m; slots (a,b,c,e)
inline std::vector<SignedTerm> div_veblen_rhs_terms(const CurvaturePoint& cp, double sign) {
  const int n = cp.dim();
  std::vector<SignedTerm> t;
  t.push_back({sign, gen(n, 4, [&](const Index& i) { return ric_riem(cp, i[0], i[1], i[3], i[2]); })});
  t.push_back({-sign, gen(n, 4, [&](const Index& i) { return ric_riem(cp, i[1], i[0], i[2], i[3]); })});
  t.push_back({sign, gen(n, 4, [&](const Index& i) { return ric_riem(cp, i[2], i[3], i[1], i[0]); })});
  t.push_back({-sign, gen(n, 4, [&](const Index& i) { return ric_riem(cp, i[3], i[2], i[0], i[1]); })});
  return t;
}

inline std::vector<SignedTerm> lovelock_lhs_terms(const TensorValue& D2) {
  const int n = D2.dim();
  std::vector<SignedTerm> t;
  t.push_back({1.0, gen(n, 4, [&](const Index& i) { return D2(i[0], i[1], i[2], i[3]); })});
  t.push_back({1.0, gen(n, 4, [&](const Index& i) { return D2(i[1], i[2], i[0], i[3]); })});
  t.push_back({1.0, gen(n, 4, [&](const Index& i) { return D2(i[2], i[0], i[1], i[3]); })});
  return t;
}

inline IdentityTerms identity_terms_impl(const CurvaturePoint& cp, const IdentityId& id) {
  const int n = cp.dim();
  const TensorValue& N1 = cp.nabla_riemann;
  const TensorValue& N2 = cp.nabla2_riemann;
  IdentityTerms out;
  auto& t = out.terms;
  switch (id.kind) {
    case IdentityKind::Veblen1: {
      // ∇_a R_bcd^e − ∇_b R_adc^e + ∇_c R_adb^e − ∇_d R_bca^e
      const Valence v = valence_of(4, 1);
      auto mk = [&](auto&& f) { return TensorValue::generate(n, v, f); };
      t.push_back({1.0, mk([&](const Index& i) { return N1(i[0], i[1], i[2], i[3], i[4]); })});
      t.push_back({-1.0, mk([&](const Index& i) { return N1(i[1], i[0], i[3], i[2], i[4]); })});
      t.push_back({1.0, mk([&](const Index& i) { return N1(i[2], i[0], i[3], i[1], i[4]); })});
      t.push_back({-1.0, mk([&](const Index& i) { return N1(i[3], i[1], i[2], i[0], i[4]); })});
      break;
    }
    case IdentityKind::Walker2: {
      const TensorValue cm = riemann_commutator(nabla2_riemann_low(cp));
      t.push_back({1.0, cm});
      t.push_back({1.0, gen(n, 6, [&](const Index& i) { return cm(i[2], i[3], i[0], i[1], i[4], i[5]); })});
      t.push_back({1.0, gen(n, 6, [&](const Index& i) { return cm(i[4], i[5], i[0], i[1], i[2], i[3]); })});
      break;
    }
    case IdentityKind::Lichnerowicz3: {
      const double ric = cp.ricci.max_abs();
      if (ric > kRicciFlatThreshold) {
        out.applicable = false;
        out.note = "Ricci tensor does not vanish (max |R_ab| = " + detail::format_real(ric) + ")";
        return out;
      }
      const TensorValue& gi = cp.metric.g_inv;
      const TensorValue& R = cp.riemann;
      const TensorValue& RL = cp.riemann_low;
      const TensorValue n2low = nabla2_riemann_low(cp);
      // R_ab^{ef}, R^e_ac^f and R^e_bcf
      const TensorValue r_up2 = raise_lower(raise_lower(RL, 2, cp.metric), 3, cp.metric);
      const TensorValue r_up0 = raise_lower(R, 0, cp.metric);
      const TensorValue rl_up0 = raise_lower(RL, 0, cp.metric);
      t.push_back({1.0, gen(n, 4, [&](const Index& i) {
                     double s = 0.0;
                     for (int f = 0; f < n; ++f) {
                       for (int e = 0; e < n; ++e) s += gi(f, e) * n2low(f, e, i[0], i[1], i[2], i[3]);
                     }
                     return s;
                   })});
      // the printed sign of R_ab^{ef} R_efcd is +; contracting Main4 with g^ab gives −
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) {
                     double s = 0.0;
                     for (int e = 0; e < n; ++e) {
                       for (int f = 0; f < n; ++f) s += r_up2(i[0], i[1], e, f) * RL(e, f, i[2], i[3]);
                     }
                     return s;
                   })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) {
                     double s = 0.0;
                     for (int e = 0; e < n; ++e) {
                       for (int f = 0; f < n; ++f) s += r_up0(e, i[0], i[2], f) * RL(e, i[1], i[3], f);
                     }
                     return 2.0 * s;
                   })});
      t.push_back({1.0, gen(n, 4, [&](const Index& i) {
                     double s = 0.0;
                     for (int e = 0; e < n; ++e) {
                       for (int f = 0; f < n; ++f) s += R(e, i[0], i[3], f) * rl_up0(e, i[1], i[2], f);
                     }
                     return 2.0 * s;
                   })});
      break;
    }
    case IdentityKind::Main4: {
      const Valence v = valence_of(5, 1);
      auto mk = [&](auto&& f) { return TensorValue::generate(n, v, f); };
      t.push_back({1.0, mk([&](const Index& i) { return N2(i[0], i[1], i[2], i[3], i[4], i[5]); })});
      t.push_back({1.0, mk([&](const Index& i) { return N2(i[1], i[2], i[3], i[0], i[4], i[5]); })});
      t.push_back({1.0, mk([&](const Index& i) { return N2(i[2], i[3], i[0], i[1], i[4], i[5]); })});
      t.push_back({1.0, mk([&](const Index& i) { return N2(i[3], i[0], i[1], i[2], i[4], i[5]); })});
      for (auto& term : main_rhs_terms(cp, -1.0)) t.push_back(std::move(term));
      break;
    }
    case IdentityKind::CorollaryU: {
      // ∇_(a ∇_b U_cd) = R_(abc^m U_d)m with U_cd = R_cd − R_dc
      const TensorValue nnric = nabla2_ricci(cp);
      auto nnu = [&](int a, int b, int c, int d) { return nnric(a, b, c, d) - nnric(a, b, d, c); };
      auto ru = [&](int a, int b, int c, int d) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += cp.riemann(a, b, c, m) * (cp.ricci(d, m) - cp.ricci(m, d));
        return s;
      };
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return nnu(i[0], i[1], i[2], i[3]); })});
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return nnu(i[1], i[2], i[3], i[0]); })});
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return nnu(i[2], i[3], i[0], i[1]); })});
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return nnu(i[3], i[0], i[1], i[2]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return ru(i[0], i[1], i[2], i[3]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return ru(i[1], i[2], i[3], i[0]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return ru(i[2], i[3], i[0], i[1]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return ru(i[3], i[0], i[1], i[2]); })});
      break;
    }
    case IdentityKind::Lovelock6: {
      t = lovelock_lhs_terms(nabla_div_riemann(N2));
      for (auto& term : lovelock_rhs_terms(cp, -1.0, 1.0)) t.push_back(std::move(term));
      break;
    }
    case IdentityKind::KLovelock7: {
      const KKind kind = id.k.value_or(KKind::projective());
      if (n < kind.min_dim()) {
        out.applicable = false;
        out.note = "the " + kind.name() + " tensor needs dimension >= " + std::to_string(kind.min_dim());
        return out;
      }
      t = lovelock_lhs_terms(nabla_div_riemann(k_derivatives(cp, kind).nabla2));
      const double A = k_divergence_form(kind, n).A;
      for (auto& term : lovelock_rhs_terms(cp, -1.0, A)) t.push_back(std::move(term));
      break;
    }
    case IdentityKind::DivVeblen8: {
      // ∇_a∇_m R_bec^m − ∇_b∇_m R_ace^m + ∇_c∇_m R_eba^m − ∇_e∇_m R_cab^m; slots (a,b,c,e)
      const TensorValue D2 = nabla_div_riemann(N2);
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return D2(i[0], i[1], i[3], i[2]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return D2(i[1], i[0], i[2], i[3]); })});
      t.push_back({1.0, gen(n, 4, [&](const Index& i) { return D2(i[2], i[3], i[1], i[0]); })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) { return D2(i[3], i[2], i[0], i[1]); })});
      for (auto& term : div_veblen_rhs_terms(cp, -1.0)) t.push_back(std::move(term));
      break;
    }
    case IdentityKind::DivDiv9: {
      // ∇_m ∇_n R_ab^{mn} = g^{pm} ∇_m ∇_n R_abp^n
      const TensorValue& gi = cp.metric.g_inv;
      t.push_back({1.0, gen(n, 2, [&](const Index& i) {
                     double s = 0.0;
                     for (int m = 0; m < n; ++m) {
                       for (int p = 0; p < n; ++p) {
                         if (gi(p, m) == 0.0) continue;
                         double inner = 0.0;
                         for (int q = 0; q < n; ++q) inner += N2(m, q, i[0], i[1], p, q);
                         s += gi(p, m) * inner;
                       }
                     }
                     return s;
                   })});
      break;
    }
    case IdentityKind::AlgRRR10: t = main_rhs_terms(cp, 1.0); break;
    case IdentityKind::AlgRR11: t = lovelock_rhs_terms(cp, 1.0, 1.0); break;
    case IdentityKind::AlgRRRR12: t = div_veblen_rhs_terms(cp, 1.0); break;
    case IdentityKind::Tachibana: {
      const TachibanaFit fit = tachibana_fit(cp);
      t.push_back({1.0, fit.commutator});
      t.push_back({-1.0, fit.q * fit.l_r});
      if (fit.degenerate) out.note = "Q(g,R) vanishes; L_R undetermined";
      break;
    }
    case IdentityKind::RicciPseudo: {
      // [∇_a,∇_b] R_de = L_R (−g_db R_ea + g_da R_eb − g_eb R_da + g_ea R_db); slots (a,b,d,e)
      const TachibanaFit fit = tachibana_fit(cp);
      const TensorValue nnric = nabla2_ricci(cp);
      const TensorValue& g = cp.metric.g;
      const TensorValue& Ric = cp.ricci;
      t.push_back({1.0, gen(n, 4, [&](const Index& i) {
                     return nnric(i[0], i[1], i[2], i[3]) - nnric(i[1], i[0], i[2], i[3]);
                   })});
      t.push_back({-1.0, gen(n, 4, [&](const Index& i) {
                     const int a = i[0], b = i[1], d = i[2], e = i[3];
                     return fit.l_r * (-g(d, b) * Ric(e, a) + g(d, a) * Ric(e, b) - g(e, b) * Ric(d, a) +
                                       g(e, a) * Ric(d, b));
                   })});
      if (fit.degenerate) out.note = "Q(g,R) vanishes; L_R undetermined";
      break;
    }
  }
  return out;
}

inline Residual combine(const IdentityId& id, const IdentityTerms& it, int flipped) {
  Residual r;
  r.id = id;
  r.applicable = it.applicable;
  r.note = it.note;
  r.terms = static_cast<int>(it.terms.size());
  if (!it.applicable || it.terms.empty()) return r;
  TensorValue sum(it.terms.front().value.dim(), it.terms.front().value.valence());
  for (int k = 0; k < r.terms; ++k) {
    const auto& term = it.terms[k];
    const double s = k == flipped ? -term.sign : term.sign;
    const auto src = term.value.data();
    auto dst = sum.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    r.scale = std::max(r.scale, term.value.max_abs());
  }
  std::size_t worst = 0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double v = std::abs(sum.data()[i]);
    if (v > r.max_abs) {
      r.max_abs = v;
      worst = i;
    }
  }
  const Index w = sum.unflatten(worst);
  r.worst_index.assign(w.begin(), w.begin() + sum.rank());
  r.relative = r.max_abs == 0.0 ? 0.0 : r.max_abs / std::max(1.0, r.scale);
  return r;
}

}  // namespace detail

/// The signed terms of an identity at a point.
inline IdentityTerms identity_terms(const CurvaturePoint& cp, const IdentityId& id) {
  return detail::identity_terms_impl(cp, id);
}

inline Residual residual(const CurvaturePoint& cp, const IdentityId& id) {
  return detail::combine(id, identity_terms(cp, id), -1);
}

/// Residual with the sign of term `mutation` flipped.
inline Residual mutated_residual(const CurvaturePoint& cp, const IdentityId& id, int mutation) {
  const IdentityTerms it = identity_terms(cp, id);
  if (!it.applicable) return detail::combine(id, it, -1);
  if (mutation < 0 || mutation >= static_cast<int>(it.terms.size())) {
    throw ArgumentError("mutation index out of range for " + id.name() + " (" + std::to_string(it.terms.size()) +
                        " terms)");
  }
  return detail::combine(id, it, mutation);
}

/// The summed residual tensor of an identity (empty when not applicable).
inline TensorValue residual_tensor(const CurvaturePoint& cp, const IdentityId& id) {
  const IdentityTerms it = identity_terms(cp, id);
  if (!it.applicable || it.terms.empty()) return TensorValue();
  TensorValue sum(it.terms.front().value.dim(), it.terms.front().value.valence());
  for (const auto& term : it.terms) sum += term.value * term.sign;
  return sum;
}

/// Half the sum of the Lovelock6 residual over the cyclic permutations of
/// (a,b,c,e); equal to the DivVeblen8 residual.
inline TensorValue lovelock_cycle_combination(const CurvaturePoint& cp) {
  const TensorValue L = residual_tensor(cp, IdentityKind::Lovelock6);
  return TensorValue::generate(cp.dim(), L.valence(), [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], e = i[3];
    return 0.5 * (L(a, b, c, e) + L(b, c, e, a) + L(c, e, a, b) + L(e, a, b, c));
  });
}

}  // namespace curv
