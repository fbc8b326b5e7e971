#pragma once

// Detection and fitting of differential structures at sampled points:
// local symmetry, harmonic curvature, NCS, semisymmetry, pseudosymmetry,
// constant curvature, (generalized) recurrence, K-recurrence and WRS.
//
// Fitted covectors are pointwise; their closedness is estimated by central
// differences over auxiliary points around each sample.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curv/curvature.hpp"
#include "curv/identities.hpp"
#include "curv/k_tensors.hpp"
#include "curv/metric_dsl.hpp"
#include "curv/tensor.hpp"

namespace curv {

inline constexpr double kVanishingNorm = 1e-10;
inline constexpr double kClosednessStep = 1e-3;

struct StructureOptions {
  double tol = 1e-8;
  std::vector<KKind> kinds = KKind::all();
  double fd_step = kClosednessStep;
};

// ---------------------------------------------------------------------------
// pointwise residuals

/// R_abcd − R/(n(n−1)) (g_bd g_ac − g_ad g_bc), max-abs.
inline double constant_curvature_residual(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue& g = cp.metric.g;
  const double k = cp.scalar / (n * (n - 1.0));
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double model = k * (g(b, d) * g(a, c) - g(a, d) * g(b, c));
          m = std::max(m, std::abs(cp.riemann_low(a, b, c, d) - model));
        }
  return m;
}

/// ∇_a R_bc − ∇_b R_ac − (g_bc ∇_a R − g_ac ∇_b R) / (2(n−1)).
inline Residual ncs_residual(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue dric = nabla_ricci(cp);
  const TensorValue dR = nabla_scalar(cp);
  const TensorValue& g = cp.metric.g;
  IdentityTerms it;
  const Valence v = covariant(3);
  it.terms.push_back({1.0, TensorValue::generate(n, v, [&](const Index& i) { return dric(i[0], i[1], i[2]); })});
  it.terms.push_back({-1.0, TensorValue::generate(n, v, [&](const Index& i) { return dric(i[1], i[0], i[2]); })});
  it.terms.push_back({-1.0, TensorValue::generate(n, v, [&](const Index& i) {
                        return (g(i[1], i[2]) * dR(i[0]) - g(i[0], i[2]) * dR(i[1])) / (2.0 * (n - 1));
                      })});
  Residual r = detail::combine(IdentityId{}, it, -1);
  r.note = "NCS";
  return r;
}

inline double semisymmetric_residual(const CurvaturePoint& cp) {
  return detail::riemann_commutator(detail::nabla2_riemann_low(cp)).max_abs();
}

struct PseudosymmetricFit {
  bool degenerate_q = false;
  double l_r = 0.0;
  double fit_residual = 0.0;
  double semisymmetric_residual = 0.0;
};

/// L_R = ⟨[∇,∇]R, Q⟩ / ⟨Q,Q⟩ and the remainder relative to max(1, scale).
/// With Q ≈ 0 only the semisymmetric residual is meaningful.
inline PseudosymmetricFit pseudosymmetric_fit(const CurvaturePoint& cp) {
  const TachibanaFit tf = tachibana_fit(cp);
  PseudosymmetricFit out;
  out.semisymmetric_residual = tf.commutator.max_abs();
  out.degenerate_q = tf.degenerate;
  out.l_r = tf.l_r;
  if (tf.degenerate) {
    out.l_r = 0.0;
    return out;
  }
  const TensorValue rem = tf.commutator - tf.q * tf.l_r;
  const double scale = std::max(tf.commutator.norm(), std::abs(tf.l_r) * tf.q_norm);
  out.fit_residual = rem.norm() / std::max(1.0, scale);
  return out;
}

// ---------------------------------------------------------------------------
// recurrence

struct RecurrenceTarget {
  std::optional<KKind> k;  // empty: the Riemann tensor

  static RecurrenceTarget riemann() { return {}; }
  static RecurrenceTarget of(KKind kind) { return {kind}; }
  std::string name() const { return k ? k->name() : "riemann"; }
};

struct RecurrenceFit {
  bool unfit = false;
  std::string marker;
  TensorValue lambda;  // covector
  double fit_residual = 0.0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_of(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ∇T split into the n slices ∇_a T.
inline std::span<const double> slice(const TensorValue& nabla, int a, std::size_t block) {
  return nabla.data().subspan(static_cast<std::size_t>(a) * block, block);
}

}  // namespace detail

/// λ_a = ⟨∇_a T, T⟩ / ⟨T, T⟩ at one point.
inline RecurrenceFit fit_recurrence(const CurvaturePoint& cp, const RecurrenceTarget& target) {
  const int n = cp.dim();
  RecurrenceFit out;
  out.lambda = TensorValue(n, covariant(1));
  if (target.k && n < target.k->min_dim()) {
    out.unfit = true;
    out.marker = "dimension too small for the " + target.k->name() + " tensor";
    return out;
  }
  TensorValue T, dT;
  if (target.k) {
    const KDerivatives kd = k_derivatives(cp, *target.k);
    T = kd.k;
    dT = kd.nabla;
  } else {
    T = cp.riemann;
    dT = cp.nabla_riemann;
  }
  const double tt = detail::dot(T.data(), T.data());
  if (std::sqrt(tt) <= kVanishingNorm) {
    out.unfit = true;
    out.marker = "target tensor vanishes";
    return out;
  }
  double rem2 = 0.0;
  for (int a = 0; a < n; ++a) {
    const auto s = detail::slice(dT, a, T.size());
    const double l = detail::dot(s, T.data()) / tt;
    out.lambda(a) = l;
    for (std::size_t i = 0; i < T.size(); ++i) {
      const double r = s[i] - l * T.data()[i];
      rem2 += r * r;
    }
  }
  const double scale = std::max(T.norm(), dT.norm());
  out.fit_residual = std::sqrt(rem2) / scale;
  return out;
}

struct GeneralizedRecurrenceFit {
  bool unfit = false;
  bool rank_deficient = false;
  std::string marker;
  TensorValue lambda;
  TensorValue mu;
  double fit_residual = 0.0;
  double collinearity = 0.0;  // max |λ_a μ_b − λ_b μ_a|
};

/// ∇_a R_bcd^e = λ_a R_bcd^e + μ_a (δ_b^e g_cd − δ_c^e g_bd), per-a least squares.
inline GeneralizedRecurrenceFit fit_generalized_recurrence(const CurvaturePoint& cp) {
  const int n = cp.dim();
  GeneralizedRecurrenceFit out;
  out.lambda = TensorValue(n, covariant(1));
  out.mu = TensorValue(n, covariant(1));
  const TensorValue& T = cp.riemann;
  if (T.norm() <= kVanishingNorm) {
    out.unfit = true;
    out.marker = "Riemann tensor vanishes";
    return out;
  }
  const TensorValue& g = cp.metric.g;
  const TensorValue G = TensorValue::generate(n, riemann_valence(), [&](const Index& i) {
    const int b = i[0], c = i[1], d = i[2], e = i[3];
    return (b == e) * g(c, d) - (c == e) * g(b, d);
  });
  const auto N = static_cast<Eigen::Index>(T.size());
  Eigen::MatrixXd M(N, 2);
  for (Eigen::Index i = 0; i < N; ++i) {
    M(i, 0) = T.data()[i];
    M(i, 1) = G.data()[i];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(M);
  out.rank_deficient = cod.rank() < 2;
  double rem2 = 0.0;
  for (int a = 0; a < n; ++a) {
    const auto s = detail::slice(cp.nabla_riemann, a, T.size());
    const Eigen::Map<const Eigen::VectorXd> y(s.data(), N);
    const Eigen::Vector2d x = cod.solve(y);
    out.lambda(a) = x(0);
    out.mu(a) = x(1);
    rem2 += (M * x - y).squaredNorm();
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.collinearity = std::max(out.collinearity, std::abs(out.lambda(a) * out.mu(b) - out.lambda(b) * out.mu(a)));
  const double scale = std::max(T.norm(), cp.nabla_riemann.norm());
  out.fit_residual = std::sqrt(rem2) / scale;
  return out;
}

// ---------------------------------------------------------------------------
// weakly Ricci symmetric

struct WrsFit {
  bool unfit = false;
  int rank = 0;
  bool rank_deficient = false;  // numerical rank < 3n, or Einstein
  bool einstein = false;        // Ricci ∝ g: A, B, D are not identifiable
  std::string marker;
  TensorValue A, B, D;
  double fit_residual = 0.0;
  double det_mixed_ricci = 0.0;
  double b_minus_d_norm = 0.0;
  double wrs_rr_residual = 0.0;      // max |R_dm R_bac^m + R_bm R_adc^m + R_am R_dbc^m|
  double beta_eigen_residual = 0.0;  // max |R^a_b β^b − R β^a|
};

/// ∇_a R_bc = A_a R_bc + B_b R_ac + D_c R_ab, least squares over 3n unknowns.
inline WrsFit fit_wrs(const CurvaturePoint& cp, double tol = 1e-8) {
  const int n = cp.dim();
  WrsFit out;
  out.A = out.B = out.D = TensorValue(n, covariant(1));
  const TensorValue& Ric = cp.ricci;
  if (Ric.norm() <= kVanishingNorm) {
    out.unfit = true;
    out.marker = "Ricci tensor vanishes";
    return out;
  }
  const TensorValue dric = nabla_ricci(cp);
  const int rows = n * n * n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, 3 * n);
  Eigen::VectorXd y(rows);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int r = (a * n + b) * n + c;
        M(r, a) += Ric(b, c);
        M(r, n + b) += Ric(a, c);
        M(r, 2 * n + c) += Ric(a, b);
        y(r) = dric(a, b, c);
      }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(M);
  out.rank = static_cast<int>(cod.rank());
  const Eigen::VectorXd x = cod.solve(y);
  for (int a = 0; a < n; ++a) {
    out.A(a) = x(a);
    out.B(a) = x(n + a);
    out.D(a) = x(2 * n + a);
  }
  const double scale = std::max(Ric.norm(), dric.norm());
  out.fit_residual = (M * x - y).norm() / scale;

  const TensorValue mixed = raise_lower(Ric, 1, cp.metric);
  Eigen::MatrixXd Rm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Rm(a, b) = mixed(a, b);
  out.det_mixed_ricci = Rm.determinant();

  // Einstein test: Ricci − (R/n) g
  double dev = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) dev = std::max(dev, std::abs(Ric(a, b) - cp.scalar / n * cp.metric.g(a, b)));
  out.einstein = dev <= tol * std::max(1.0, Ric.max_abs());
  out.rank_deficient = out.rank < 3 * n || out.einstein;
  if (out.einstein) out.marker = "Ricci tensor is proportional to the metric";

  TensorValue beta = out.B - out.D;
  out.b_minus_d_norm = beta.norm();
  out.wrs_rr_residual = TensorValue::generate(n, covariant(4), [&](const Index& i) {
                          const int d = i[0], b = i[1], a = i[2], c = i[3];
                          return detail::ric_riem(cp, d, b, a, c) + detail::ric_riem(cp, b, a, d, c) +
                                 detail::ric_riem(cp, a, d, b, c);
                        }).max_abs();
  const TensorValue beta_up = raise_lower(beta, 0, cp.metric);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += mixed(b, a) * beta_up(b);
    out.beta_eigen_residual = std::max(out.beta_eigen_residual, std::abs(s - cp.scalar * beta_up(a)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// closedness of fitted covector fields

/// A covector computed from the curvature at a point, or nothing if unfit.
using CovectorAt = std::function<std::optional<TensorValue>(const CurvaturePoint&)>;

struct Closedness {
  bool available = false;
  TensorValue d;  // ∂_a ω_b − ∂_b ω_a
  double residual = 0.0;
};

/// Central differences with step h; auxiliary points may leave the domain box.
inline Closedness covector_closedness(const MetricSpec& spec, std::span<const double> point, const CovectorAt& omega,
                                      double h = kClosednessStep) {
  const int n = spec.dim;
  Closedness out;
  Eigen::MatrixXd J(n, n);  // J(k, b) = ∂_k ω_b
  std::vector<double> p(point.begin(), point.end());
  for (int k = 0; k < n; ++k) {
    std::optional<TensorValue> plus, minus;
    try {
      p[k] = point[k] + h;
      plus = omega(riemann_at(spec, p, DomainCheck::Skip));
      p[k] = point[k] - h;
      minus = omega(riemann_at(spec, p, DomainCheck::Skip));
    } catch (const Error&) {
      return out;
    }
    p[k] = point[k];
    if (!plus || !minus) return out;
    for (int b = 0; b < n; ++b) J(k, b) = ((*plus)(b) - (*minus)(b)) / (2 * h);
  }
  out.available = true;
  out.d = TensorValue::generate(n, covariant(2), [&](const Index& i) { return J(i[0], i[1]) - J(i[1], i[0]); });
  out.residual = out.d.max_abs();
  return out;
}

// ---------------------------------------------------------------------------
// multi-point results

struct RecurrenceResult {
  RecurrenceTarget target;
  std::vector<RecurrenceFit> points;
  bool unfit = false;
  double fit_residual = 0.0;
  bool closedness_available = false;
  double closedness = 0.0;
};

inline RecurrenceResult fit_recurrence(const MetricSpec& spec, const std::vector<std::vector<double>>& points,
                                       const RecurrenceTarget& target, bool with_closedness = true,
                                       double h = kClosednessStep) {
  RecurrenceResult out;
  out.target = target;
  out.closedness_available = with_closedness;
  const CovectorAt lambda = [&](const CurvaturePoint& cp) -> std::optional<TensorValue> {
    RecurrenceFit f = fit_recurrence(cp, target);
    if (f.unfit) return std::nullopt;
    return f.lambda;
  };
  for (const auto& p : points) {
    const CurvaturePoint cp = riemann_at(spec, p);
    RecurrenceFit f = fit_recurrence(cp, target);
    out.unfit = out.unfit || f.unfit;
    if (!f.unfit) {
      out.fit_residual = std::max(out.fit_residual, f.fit_residual);
      if (with_closedness) {
        const Closedness c = covector_closedness(spec, p, lambda, h);
        out.closedness_available = out.closedness_available && c.available;
        out.closedness = std::max(out.closedness, c.residual);
      }
    }
    out.points.push_back(std::move(f));
  }
  if (out.unfit) out.closedness_available = false;
  return out;
}

struct GeneralizedRecurrenceResult {
  std::vector<GeneralizedRecurrenceFit> points;
  bool unfit = false;
  bool rank_deficient = false;
  double fit_residual = 0.0;
  double collinearity = 0.0;
  bool closedness_available = false;
  double closedness = 0.0;
  double constant_curvature_residual = 0.0;
  /// λ closed (≤ 1e-5) or constant curvature (≤ 1e-8) at every point.
  bool lemma_holds = false;
};

inline constexpr double kClosednessTol = 1e-5;
inline constexpr double kConstantCurvatureTol = 1e-8;

inline GeneralizedRecurrenceResult fit_generalized_recurrence(const MetricSpec& spec,
                                                              const std::vector<std::vector<double>>& points,
                                                              double h = kClosednessStep) {
  GeneralizedRecurrenceResult out;
  out.closedness_available = true;
  out.lemma_holds = true;
  const CovectorAt lambda = [](const CurvaturePoint& cp) -> std::optional<TensorValue> {
    GeneralizedRecurrenceFit f = fit_generalized_recurrence(cp);
    if (f.unfit) return std::nullopt;
    return f.lambda;
  };
  for (const auto& p : points) {
    const CurvaturePoint cp = riemann_at(spec, p);
    GeneralizedRecurrenceFit f = fit_generalized_recurrence(cp);
    const double ccr = constant_curvature_residual(cp);
    out.constant_curvature_residual = std::max(out.constant_curvature_residual, ccr);
    out.unfit = out.unfit || f.unfit;
    out.rank_deficient = out.rank_deficient || f.rank_deficient;
    if (!f.unfit) {
      out.fit_residual = std::max(out.fit_residual, f.fit_residual);
      out.collinearity = std::max(out.collinearity, f.collinearity);
      const Closedness c = covector_closedness(spec, p, lambda, h);
      out.closedness_available = out.closedness_available && c.available;
      out.closedness = std::max(out.closedness, c.residual);
      const bool closed = c.available && c.residual <= kClosednessTol;
      out.lemma_holds = out.lemma_holds && (closed || ccr <= kConstantCurvatureTol);
    }
    out.points.push_back(std::move(f));
  }
  if (out.unfit) {
    out.closedness_available = false;
    out.lemma_holds = false;
  }
  return out;
}

struct WrsResult {
  std::vector<WrsFit> points;
  bool unfit = false;
  bool rank_deficient = false;
  double fit_residual = 0.0;
  double min_abs_det_mixed_ricci = std::numeric_limits<double>::infinity();
  double b_minus_d_norm = 0.0;
  bool alpha_closedness_available = false;
  double alpha_closedness = 0.0;  // A − B
  double lemma_residual = 0.0;    // Lemma (A−B) evaluated with the differenced α
  double wrs_rr_residual = 0.0;
  bool beta_checked = false;      // β = B − D nonzero somewhere
  double beta_eigen_residual = 0.0;
  double beta_ricci_identity_residual = 0.0;
  double beta_identity_residual = 0.0;
};

namespace detail {

// R_cb dα_da + R_ca dα_bd + R_cd dα_ab − (R_dm R_bac^m + R_bm R_adc^m + R_am R_dbc^m)
inline double wrs_lemma_residual(const CurvaturePoint& cp, const TensorValue& dalpha) {
  const int n = cp.dim();
  const TensorValue& Ric = cp.ricci;
  double m = 0.0;
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          const double lhs = Ric(c, b) * dalpha(d, a) + Ric(c, a) * dalpha(b, d) + Ric(c, d) * dalpha(a, b);
          const double rhs = ric_riem(cp, d, b, a, c) + ric_riem(cp, b, a, d, c) + ric_riem(cp, a, d, b, c);
          m = std::max(m, std::abs(lhs - rhs));
        }
  return m;
}

// W_c · (dβ_da, dβ_bd, dβ_ab) cyclic, for W = Ricci (rank 2) or β (rank 1).
inline double beta_cyclic(const TensorValue& dbeta, const std::function<double(int, int)>& w, int n, bool has_c) {
  double m = 0.0;
  const int cs = has_c ? n : 1;
  for (int c = 0; c < cs; ++c)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
          m = std::max(m, std::abs(w(c, b) * dbeta(d, a) + w(c, a) * dbeta(b, d) + w(c, d) * dbeta(a, b)));
  return m;
}

}  // namespace detail

inline WrsResult fit_wrs(const MetricSpec& spec, const std::vector<std::vector<double>>& points, double tol = 1e-8,
                         double h = kClosednessStep) {
  WrsResult out;
  out.alpha_closedness_available = true;
  const CovectorAt alpha = [tol](const CurvaturePoint& cp) -> std::optional<TensorValue> {
    WrsFit f = fit_wrs(cp, tol);
    if (f.unfit) return std::nullopt;
    return f.A - f.B;
  };
  const CovectorAt beta = [tol](const CurvaturePoint& cp) -> std::optional<TensorValue> {
    WrsFit f = fit_wrs(cp, tol);
    if (f.unfit) return std::nullopt;
    return f.B - f.D;
  };
  for (const auto& p : points) {
    const CurvaturePoint cp = riemann_at(spec, p);
    WrsFit f = fit_wrs(cp, tol);
    out.unfit = out.unfit || f.unfit;
    if (!f.unfit) {
      out.rank_deficient = out.rank_deficient || f.rank_deficient;
      out.fit_residual = std::max(out.fit_residual, f.fit_residual);
      out.min_abs_det_mixed_ricci = std::min(out.min_abs_det_mixed_ricci, std::abs(f.det_mixed_ricci));
      out.b_minus_d_norm = std::max(out.b_minus_d_norm, f.b_minus_d_norm);
      out.wrs_rr_residual = std::max(out.wrs_rr_residual, f.wrs_rr_residual);
      const Closedness c = covector_closedness(spec, p, alpha, h);
      out.alpha_closedness_available = out.alpha_closedness_available && c.available;
      if (c.available) {
        out.alpha_closedness = std::max(out.alpha_closedness, c.residual);
        out.lemma_residual = std::max(out.lemma_residual, detail::wrs_lemma_residual(cp, c.d));
      }
      if (f.b_minus_d_norm > tol) {
        out.beta_checked = true;
        out.beta_eigen_residual = std::max(out.beta_eigen_residual, f.beta_eigen_residual);
        const Closedness cb = covector_closedness(spec, p, beta, h);
        if (cb.available) {
          const int n = cp.dim();
          const TensorValue bv = f.B - f.D;
          out.beta_ricci_identity_residual =
              std::max(out.beta_ricci_identity_residual,
                       detail::beta_cyclic(cb.d, [&](int c, int x) { return cp.ricci(c, x); }, n, true));
          out.beta_identity_residual = std::max(
              out.beta_identity_residual, detail::beta_cyclic(cb.d, [&](int, int x) { return bv(x); }, n, false));
        }
      }
    }
    out.points.push_back(std::move(f));
  }
  if (out.unfit) out.alpha_closedness_available = false;
  return out;
}

/// A (R_am R_bce^m + R_bm R_cae^m + R_cm R_abe^m) − ∇_m B_abce^m, max-abs.
inline double krm_theorem_residual(const CurvaturePoint& cp, const KKind& kind) {
  const int n = cp.dim();
  const double A = k_divergence_form(kind, n).A;
  const TensorValue divB = k_div_B(cp, kind).formula;
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          const double rr =
              detail::ric_riem(cp, a, b, c, e) + detail::ric_riem(cp, b, c, a, e) + detail::ric_riem(cp, c, a, b, e);
          m = std::max(m, std::abs(A * rr - divB(a, b, c, e)));
        }
  return m;
}

// ---------------------------------------------------------------------------
// classification

struct StructureFlag {
  bool value = false;
  double residual = 0.0;
};

struct PseudosymmetricSummary {
  bool degenerate_q = false;  // Q(g,R) vanished at some point
  std::vector<double> l_r;
  double fit_residual = 0.0;
};

struct StructureReport {
  int points = 0;
  double tol = 1e-8;
  StructureFlag locally_symmetric;    // max |∇R|
  StructureFlag harmonic;             // max |∇_m R_abc^m|
  StructureFlag nearly_conformally_symmetric;  // relative NCS residual
  StructureFlag semisymmetric;        // max |[∇,∇]R|
  StructureFlag pseudosymmetric;      // relative fit remainder
  StructureFlag constant_curvature;   // max-abs constant-curvature residual
  StructureFlag recurrent;
  StructureFlag generalized_recurrent;
  StructureFlag weakly_ricci_symmetric;
  PseudosymmetricSummary pseudosymmetry;
  RecurrenceResult recurrence;
  GeneralizedRecurrenceResult generalized_recurrence;
  std::vector<RecurrenceResult> k_recurrence;
  WrsResult wrs;
};

inline StructureReport classify(const MetricSpec& spec, const std::vector<std::vector<double>>& points,
                                const StructureOptions& opt = {}) {
  if (points.empty()) throw ArgumentError("classification needs at least one point");
  StructureReport r;
  r.points = static_cast<int>(points.size());
  r.tol = opt.tol;
  double ncs = 0.0;
  for (const auto& p : points) {
    const CurvaturePoint cp = riemann_at(spec, p);
    r.locally_symmetric.residual = std::max(r.locally_symmetric.residual, cp.nabla_riemann.max_abs());
    r.harmonic.residual = std::max(r.harmonic.residual, riemann_divergence(cp).divergence.max_abs());
    ncs = std::max(ncs, ncs_residual(cp).relative);
    r.constant_curvature.residual = std::max(r.constant_curvature.residual, constant_curvature_residual(cp));
    const PseudosymmetricFit ps = pseudosymmetric_fit(cp);
    r.semisymmetric.residual = std::max(r.semisymmetric.residual, ps.semisymmetric_residual);
    r.pseudosymmetry.degenerate_q = r.pseudosymmetry.degenerate_q || ps.degenerate_q;
    r.pseudosymmetry.l_r.push_back(ps.l_r);
    if (!ps.degenerate_q) r.pseudosymmetry.fit_residual = std::max(r.pseudosymmetry.fit_residual, ps.fit_residual);
  }
  r.nearly_conformally_symmetric.residual = ncs;
  r.pseudosymmetric.residual = r.pseudosymmetry.fit_residual;

  r.recurrence = fit_recurrence(spec, points, RecurrenceTarget::riemann(), true, opt.fd_step);
  r.generalized_recurrence = fit_generalized_recurrence(spec, points, opt.fd_step);
  for (const auto& k : opt.kinds) {
    if (spec.dim < k.min_dim()) continue;
    r.k_recurrence.push_back(fit_recurrence(spec, points, RecurrenceTarget::of(k), false, opt.fd_step));
  }
  r.wrs = fit_wrs(spec, points, opt.tol, opt.fd_step);

  r.recurrent.residual = r.recurrence.fit_residual;
  r.generalized_recurrent.residual = r.generalized_recurrence.fit_residual;
  r.weakly_ricci_symmetric.residual = r.wrs.fit_residual;

  const double tol = opt.tol;
  r.locally_symmetric.value = r.locally_symmetric.residual <= tol;
  r.harmonic.value = r.harmonic.residual <= tol;
  r.nearly_conformally_symmetric.value = r.nearly_conformally_symmetric.residual <= tol;
  r.semisymmetric.value = r.semisymmetric.residual <= tol;
  r.constant_curvature.value = r.constant_curvature.residual <= tol;
  r.pseudosymmetric.value = !r.pseudosymmetry.degenerate_q && r.pseudosymmetric.residual <= tol;
  r.recurrent.value = !r.recurrence.unfit && r.recurrent.residual <= tol;
  r.generalized_recurrent.value = !r.generalized_recurrence.unfit && r.generalized_recurrent.residual <= tol;
  r.weakly_ricci_symmetric.value = !r.wrs.unfit && !r.wrs.rank_deficient && r.weakly_ricci_symmetric.residual <= tol;
  return r;
}

}  // namespace curv
