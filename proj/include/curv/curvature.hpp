#pragma once

// Levi-Civita connection, Riemann tensor and its covariant derivatives at a
// point, all computed in jet arithmetic.
//
// Conventions:
//   R_abc^d = ∂_a Γ^d_bc − ∂_b Γ^d_ac − Γ^k_ac Γ^d_bk + Γ^d_ak Γ^k_bc
//   R_ac    = R_abc^b,   R_abcd = R_abc^e g_ed,   R = g^ac R_ac
//   derivative slots prepend: nabla2_riemann(f,e,a,b,c,d) = ∇_f ∇_e R_abc^d

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "curv/errors.hpp"
#include "curv/jet_tensor.hpp"
#include "curv/metric_dsl.hpp"
#include "curv/tensor.hpp"

namespace curv {

inline const Valence& riemann_valence() {
  static const Valence v{Variance::Covariant, Variance::Covariant, Variance::Covariant, Variance::Contravariant};
  return v;
}

/// Metric, inverse metric and coordinate functions as jets at one point.
struct MetricJets {
  int dim = 0;
  int order = 0;
  std::vector<double> point;
  std::vector<Jet> coords;
  JetTensor g;      // (0,2)
  JetTensor g_inv;  // (2,0)
};

inline MetricJets metric_jets(const MetricSpec& spec, std::span<const double> point, int order,
                              DomainCheck check = DomainCheck::Enforce) {
  const JetMatrix m = eval_metric(spec, point, order, check);
  const int n = spec.dim;
  MetricJets mj;
  mj.dim = n;
  mj.order = order;
  mj.point.assign(point.begin(), point.end());
  for (int i = 0; i < n; ++i) mj.coords.push_back(jet_variable(n, order, i, point[i]));
  mj.g = JetTensor::generate(n, covariant(2), order, [&](const Index& i) { return m(i[0], i[1]); });
  const std::vector<Jet> inv = jet_inverse(n, m.entries);
  mj.g_inv = JetTensor::generate(n, valence_of(0, 2), order, [&](const Index& i) {
    // symmetrize away rounding from the elimination order
    return 0.5 * (inv[i[0] * n + i[1]] + inv[i[1] * n + i[0]]);
  });
  return mj;
}

/// Γ^d_bc in slots (b, c, d), one jet order below the metric.
inline JetTensor christoffel_jets(const MetricJets& mj) {
  const int n = mj.dim;
  const int order = mj.order - 1;
  std::vector<JetTensor> dg;
  for (int k = 0; k < n; ++k) dg.push_back(mj.g.partial(k));
  const JetTensor gi = mj.g_inv.truncated(order);
  JetTensor gamma = JetTensor::generate(n, valence_of(2, 1), order, [&](const Index& i) {
    const int b = i[0], c = i[1], d = i[2];
    if (c < b) return Jet(n, order);  // filled by symmetry below
    Jet acc(n, order);
    for (int k = 0; k < n; ++k) {
      Jet bracket = dg[b](k, c) + dg[c](k, b) - dg[k](b, c);
      acc.add_product(gi(d, k), bracket, 0.5);
    }
    return acc;
  });
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < b; ++c) {
      for (int d = 0; d < n; ++d) gamma.at({b, c, d}) = gamma(c, b, d);
    }
  }
  return gamma;
}

/// R_abc^d as jets, one order below Γ.
inline JetTensor riemann_jets(const JetTensor& gamma) {
  const int n = gamma.dim();
  const int order = gamma.order() - 1;
  std::vector<JetTensor> dG;
  for (int a = 0; a < n; ++a) dG.push_back(gamma.partial(a));
  const JetTensor G = gamma.truncated(order);
  return JetTensor::generate(n, riemann_valence(), order, [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], d = i[3];
    Jet acc = dG[a](b, c, d) - dG[b](a, c, d);
    for (int k = 0; k < n; ++k) {
      acc.add_product(G(a, c, k), G(b, k, d), -1.0);
      acc.add_product(G(a, k, d), G(b, c, k));
    }
    return acc;
  });
}

/// Contracts slots (1, 3) of R_abc^d: R_ac = R_abc^b.
inline JetTensor ricci_jets(const JetTensor& riemann) {
  const int n = riemann.dim();
  return JetTensor::generate(n, covariant(2), riemann.order(), [&](const Index& i) {
    Jet acc(n, riemann.order());
    for (int b = 0; b < n; ++b) acc += riemann(i[0], b, i[1], b);
    return acc;
  });
}

inline JetTensor scalar_jets(const JetTensor& ricci, const JetTensor& g_inv) {
  const int n = ricci.dim();
  const JetTensor gi = g_inv.truncated(ricci.order());
  return JetTensor::generate(n, {}, ricci.order(), [&](const Index&) {
    Jet acc(n, ricci.order());
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) acc.add_product(gi(a, c), ricci(a, c));
    }
    return acc;
  });
}

/// Γ and its first two partials at a point.
struct ConnectionJet {
  TensorValue gamma;     // (b, c, d): Γ^d_bc
  TensorValue d_gamma;   // (e, b, c, d): ∂_e Γ^d_bc
  TensorValue dd_gamma;  // (f, e, b, c, d): ∂_f ∂_e Γ^d_bc
};

namespace detail {

inline ConnectionJet connection_values(const JetTensor& gamma) {
  const int n = gamma.dim();
  ConnectionJet cj;
  cj.gamma = gamma.value();
  cj.d_gamma = TensorValue::generate(n, valence_of(3, 1), [&](const Index& i) {
    MultiIndex m{};
    m[i[0]] += 1;
    return extract_partial(gamma(i[1], i[2], i[3]), m);
  });
  Valence v = valence_of(4, 1);
  cj.dd_gamma = TensorValue::generate(n, v, [&](const Index& i) {
    MultiIndex m{};
    m[i[0]] += 1;
    m[i[1]] += 1;
    return extract_partial(gamma(i[2], i[3], i[4]), m);
  });
  return cj;
}

inline MetricAtPoint metric_value(const MetricJets& mj) {
  const TensorValue g = mj.g.value();
  MetricAtPoint m = MetricAtPoint::from_components(mj.dim, g.data());
  m.g_inv = mj.g_inv.value();
  return m;
}

}  // namespace detail

/// Levi-Civita connection at a point with partials to second order.
inline ConnectionJet christoffel(const MetricSpec& spec, std::span<const double> point,
                                 DomainCheck check = DomainCheck::Enforce) {
  const MetricJets mj = metric_jets(spec, point, 3, check);
  return detail::connection_values(christoffel_jets(mj));
}

/// Jet-level data kept alongside a CurvaturePoint for derived tensor fields.
struct CurvatureJets {
  JetTensor g;        // order 2
  JetTensor g_inv;    // order 2
  JetTensor gamma;    // order 3
  JetTensor riemann;  // order 2
  JetTensor ricci;    // order 2
  JetTensor scalar;   // order 2, rank 0
};

struct CurvaturePoint {
  std::vector<double> point;
  MetricAtPoint metric;
  ConnectionJet connection;
  TensorValue riemann;         // R_abc^d
  TensorValue riemann_low;     // R_abcd
  TensorValue ricci;           // R_ac
  double scalar = 0.0;
  TensorValue nabla_riemann;   // ∇_e R_abc^d, slots (e,a,b,c,d)
  TensorValue nabla2_riemann;  // ∇_f ∇_e R_abc^d, slots (f,e,a,b,c,d)
  std::shared_ptr<const CurvatureJets> jets;

  int dim() const { return riemann.dim(); }
};

inline CurvaturePoint riemann_at(const MetricSpec& spec, std::span<const double> point,
                                 DomainCheck check = DomainCheck::Enforce) {
  const MetricJets mj = metric_jets(spec, point, kMaxJetOrder, check);
  auto jets = std::make_shared<CurvatureJets>();
  jets->gamma = christoffel_jets(mj);
  jets->riemann = riemann_jets(jets->gamma);
  jets->g = mj.g.truncated(2);
  jets->g_inv = mj.g_inv.truncated(2);
  jets->ricci = ricci_jets(jets->riemann);
  jets->scalar = scalar_jets(jets->ricci, jets->g_inv);

  CurvaturePoint cp;
  cp.point = mj.point;
  cp.metric = detail::metric_value(mj);
  cp.connection = detail::connection_values(jets->gamma);
  cp.riemann = jets->riemann.value();
  cp.ricci = jets->ricci.value();
  cp.scalar = jets->scalar.value()();
  cp.riemann_low = raise_lower(cp.riemann, 3, cp.metric);

  const JetTensor nabla = covariant_derivative(jets->riemann, jets->gamma);
  cp.nabla_riemann = nabla.value();
  cp.nabla2_riemann = covariant_derivative(nabla, jets->gamma).value();
  cp.jets = std::move(jets);
  return cp;
}

/// A tensor field given by a formula evaluated in jets of the metric.
using TensorField = std::function<JetTensor(const MetricJets&)>;

/// ∇T (order 1) or ∇∇T (order 2) of a field at a point.
inline TensorValue covariant_derivative(const MetricSpec& spec, std::span<const double> point,
                                        const TensorField& field, int order,
                                        DomainCheck check = DomainCheck::Enforce) {
  if (order < 1 || order > 2) throw ArgumentError("covariant derivative order must be 1 or 2");
  const MetricJets mj = metric_jets(spec, point, order + 1, check);
  const JetTensor gamma = christoffel_jets(mj);
  const JetTensor t = field(mj);
  if (t.order() < order) throw ArgumentError("field jet order is too low for the requested derivative");
  JetTensor d = covariant_derivative(t.truncated(order), gamma);
  if (order == 2) d = covariant_derivative(d, gamma);
  return d.value();
}

/// [∇_a, ∇_b] T from curvature alone; slots (a, b) prepend.
inline TensorValue commutator_action(const CurvaturePoint& cp, const TensorValue& t) {
  const int n = cp.dim();
  if (t.dim() != n) throw ArgumentError("tensor dimension differs from the curvature point");
  const int r = t.rank();
  Valence v = t.valence();
  v.insert(v.begin(), 2, Variance::Covariant);
  const TensorValue& R = cp.riemann;
  return TensorValue::generate(n, v, [&](const Index& j) {
    const int a = j[0], b = j[1];
    Index src{};
    for (int s = 0; s < r; ++s) src[s] = j[s + 2];
    double acc = 0.0;
    for (int s = 0; s < r; ++s) {
      const int orig = src[s];
      const bool up = t.valence()[s] == Variance::Contravariant;
      for (int k = 0; k < n; ++k) {
        src[s] = k;
        acc += up ? R(a, b, k, orig) * t.at(src) : -R(a, b, orig, k) * t.at(src);
      }
      src[s] = orig;
    }
    return acc;
  });
}

/// ∇_e R_ac with slots (e, a, c).
inline TensorValue nabla_ricci(const CurvaturePoint& cp) {
  const int n = cp.dim();
  return TensorValue::generate(n, covariant(3), [&](const Index& i) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += cp.nabla_riemann(i[0], i[1], b, i[2], b);
    return s;
  });
}

/// ∇_e R as a covector.
inline TensorValue nabla_scalar(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue dRic = nabla_ricci(cp);
  return TensorValue::generate(n, covariant(1), [&](const Index& i) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) s += cp.metric.g_inv(a, c) * dRic(i[0], a, c);
    }
    return s;
  });
}

struct RiemannDivergence {
  TensorValue divergence;  // ∇_m R_abc^m
  TensorValue bianchi;     // ∇_b R_ac − ∇_a R_bc
};

inline RiemannDivergence riemann_divergence(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue dRic = nabla_ricci(cp);
  RiemannDivergence out;
  out.divergence = TensorValue::generate(n, covariant(3), [&](const Index& i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += cp.nabla_riemann(m, i[0], i[1], i[2], m);
    return s;
  });
  out.bianchi = TensorValue::generate(n, covariant(3), [&](const Index& i) {
    return dRic(i[1], i[0], i[2]) - dRic(i[0], i[1], i[2]);
  });
  return out;
}

}  // namespace curv
