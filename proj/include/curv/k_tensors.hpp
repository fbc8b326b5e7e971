#pragma once

// Projective, conformal, concircular, conharmonic and quasi-conformal
// curvature tensors in the Riemann slot convention K_abc^d, their
// divergences, cyclic derivative sums B_abcd^e and divergences of B.
//
// Closed forms are written out per kind; the direct paths differentiate the
// assembled K field in jets.

#include <cmath>
#include <optional>
#include <string>

#include "curv/curvature.hpp"
#include "curv/errors.hpp"
#include "curv/jet_tensor.hpp"
#include "curv/tensor.hpp"

namespace curv {

enum class KFamily { Projective, Conformal, Concircular, Conharmonic, QuasiConformal };

struct KKind {
  KFamily family = KFamily::Projective;
  double a = 1.0;
  std::optional<double> b;  // quasi-conformal; unset means 1/(n-2)

  static KKind projective() { return {KFamily::Projective, 1.0, std::nullopt}; }
  static KKind conformal() { return {KFamily::Conformal, 1.0, std::nullopt}; }
  static KKind concircular() { return {KFamily::Concircular, 1.0, std::nullopt}; }
  static KKind conharmonic() { return {KFamily::Conharmonic, 1.0, std::nullopt}; }
  static KKind quasi_conformal(double a = 1.0, std::optional<double> b = std::nullopt) {
    if (b && a == 0.0 && *b == 0.0) throw ArgumentError("quasi-conformal constants a and b cannot both be zero");
    return {KFamily::QuasiConformal, a, b};
  }

  /// The five kinds with default constants.
  static std::vector<KKind> all() {
    return {projective(), conformal(), concircular(), conharmonic(), quasi_conformal()};
  }

  int min_dim() const { return family == KFamily::Projective || family == KFamily::Concircular ? 2 : 3; }

  double b_for(int n) const { return b ? *b : 1.0 / (n - 2); }

  /// CLI spelling: projective, conformal, concircular, conharmonic, quasi[:a:b].
  std::string name() const {
    switch (family) {
      case KFamily::Projective: return "projective";
      case KFamily::Conformal: return "conformal";
      case KFamily::Concircular: return "concircular";
      case KFamily::Conharmonic: return "conharmonic";
      case KFamily::QuasiConformal: break;
    }
    if (!b && a == 1.0) return "quasi";
    std::string out = "quasi:" + detail::format_real(a);
    if (b) out += ":" + detail::format_real(*b);
    return out;
  }

  static KKind parse(const std::string& text) {
    if (text == "projective") return projective();
    if (text == "conformal") return conformal();
    if (text == "concircular") return concircular();
    if (text == "conharmonic") return conharmonic();
    if (text == "quasi") return quasi_conformal();
    if (text.rfind("quasi:", 0) == 0) {
      const std::string rest = text.substr(6);
      const auto colon = rest.find(':');
      auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
          throw ArgumentError("bad quasi-conformal constant '" + s + "'");
        }
        return v;
      };
      if (colon == std::string::npos) return quasi_conformal(number(rest));
      return quasi_conformal(number(rest.substr(0, colon)), number(rest.substr(colon + 1)));
    }
    throw ArgumentError("unknown K tensor '" + text +
                        "'; expected projective, conformal, concircular, conharmonic or quasi[:a:b]");
  }

  friend bool operator==(const KKind&, const KKind&) = default;
};

inline void check_k_dim(const KKind& kind, int n) {
  if (n < kind.min_dim()) {
    throw ArgumentError("the " + kind.name() + " tensor needs dimension >= " + std::to_string(kind.min_dim()));
  }
}

namespace detail {

// K_abc^d from the jet fields, all truncated to `order`.
inline JetTensor k_jets(const CurvatureJets& cj, const KKind& kind, int order) {
  const int n = cj.riemann.dim();
  check_k_dim(kind, n);
  const JetTensor Rm = cj.riemann.truncated(order);
  const JetTensor Ric = cj.ricci.truncated(order);
  const JetTensor g = cj.g.truncated(order);
  const JetTensor gi = cj.g_inv.truncated(order);
  const Jet R = cj.scalar.truncated(order)();
  const JetTensor RicUp = JetTensor::generate(n, valence_of(1, 1), order, [&](const Index& i) {
    Jet acc(n, order);
    for (int k = 0; k < n; ++k) acc.add_product(Ric(i[0], k), gi(k, i[1]));
    return acc;
  });
  const double dn = n;
  return JetTensor::generate(n, riemann_valence(), order, [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], d = i[3];
    const double da = a == d, db = b == d;
    const Jet e_ric = da * Ric(b, c) - db * Ric(a, c);
    const Jet e_g = da * g(b, c) - db * g(a, c);
    const Jet e_ric_up = RicUp(a, d) * g(b, c) - RicUp(b, d) * g(a, c);
    const Jet& riem = Rm(a, b, c, d);
    switch (kind.family) {
      case KFamily::Projective: return riem + e_ric * (1.0 / (dn - 1));
      case KFamily::Concircular: return riem + R * e_g * (1.0 / (dn * (dn - 1)));
      case KFamily::Conharmonic: return riem + (e_ric + e_ric_up) * (1.0 / (dn - 2));
      case KFamily::Conformal:
        return riem + (e_ric + e_ric_up) * (1.0 / (dn - 2)) - R * e_g * (1.0 / ((dn - 1) * (dn - 2)));
      case KFamily::QuasiConformal: {
        // W = a C̃ − b(n−2)(C − C̃); the sign of the b term makes (b)–(d) hold
        const Jet conc = riem + R * e_g * (1.0 / (dn * (dn - 1)));
        const Jet conf = riem + (e_ric + e_ric_up) * (1.0 / (dn - 2)) - R * e_g * (1.0 / ((dn - 1) * (dn - 2)));
        const double bb = kind.b_for(n);
        return kind.a * conc - bb * (dn - 2) * (conf - conc);
      }
    }
    return riem;
  });
}

}  // namespace detail

/// K_abc^d at the point.
inline TensorValue k_tensor(const CurvaturePoint& cp, const KKind& kind) {
  return detail::k_jets(*cp.jets, kind, 0).value();
}

/// K, ∇_e K_abc^d and ∇_f ∇_e K_abc^d by differentiating the K field in jets.
struct KDerivatives {
  TensorValue k;
  TensorValue nabla;   // (e,a,b,c,d)
  TensorValue nabla2;  // (f,e,a,b,c,d)
};

inline KDerivatives k_derivatives(const CurvaturePoint& cp, const KKind& kind) {
  const JetTensor K = detail::k_jets(*cp.jets, kind, 2);
  const JetTensor dK = covariant_derivative(K, cp.jets->gamma);
  KDerivatives out;
  out.k = K.value();
  out.nabla = dK.value();
  out.nabla2 = covariant_derivative(dK, cp.jets->gamma).value();
  return out;
}

enum class DivergenceMode { Direct, ClosedForm };

namespace detail {

struct CurvatureGradients {
  TensorValue div;      // ∇_m R_abc^m
  TensorValue dric;     // ∇_e R_ac, slots (e,a,c)
  TensorValue dric_up;  // ∇_e R_a^c, slots (e,a,c)
  TensorValue dR;       // ∇_e R
};

inline CurvatureGradients gradients(const CurvaturePoint& cp) {
  const int n = cp.dim();
  CurvatureGradients gr;
  gr.div = riemann_divergence(cp).divergence;
  gr.dric = nabla_ricci(cp);
  gr.dR = nabla_scalar(cp);
  gr.dric_up = TensorValue::generate(n, Valence{Variance::Covariant, Variance::Covariant, Variance::Contravariant},
                                     [&](const Index& i) {
                                       double s = 0.0;
                                       for (int k = 0; k < n; ++k) s += gr.dric(i[0], i[1], k) * cp.metric.g_inv(k, i[2]);
                                       return s;
                                     });
  return gr;
}

inline TensorValue contract_derivative(const TensorValue& nabla) {
  const int n = nabla.dim();
  return TensorValue::generate(n, covariant(3), [&](const Index& i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += nabla(m, i[0], i[1], i[2], m);
    return s;
  });
}

}  // namespace detail

/// ∇_m K_abc^m, by direct differentiation or by the closed form.
inline TensorValue k_divergence(const CurvaturePoint& cp, const KKind& kind, DivergenceMode mode) {
  const int n = cp.dim();
  check_k_dim(kind, n);
  if (mode == DivergenceMode::Direct) {
    const JetTensor K = detail::k_jets(*cp.jets, kind, 1);
    return detail::contract_derivative(covariant_derivative(K, cp.jets->gamma).value());
  }
  const auto gr = detail::gradients(cp);
  const TensorValue& g = cp.metric.g;
  const double dn = n;
  // S_abc = g_bc ∇_a R − g_ac ∇_b R
  auto S = [&](int a, int b, int c) { return g(b, c) * gr.dR(a) - g(a, c) * gr.dR(b); };
  return TensorValue::generate(n, covariant(3), [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2];
    const double div = gr.div(a, b, c);
    switch (kind.family) {
      case KFamily::Projective: return (dn - 2) / (dn - 1) * div;
      case KFamily::Conformal: return (dn - 3) / (dn - 2) * (div + S(a, b, c) / (2 * (dn - 1)));
      case KFamily::Concircular: return div + S(a, b, c) / (dn * (dn - 1));
      case KFamily::Conharmonic: return (dn - 3) / (dn - 2) * div + S(a, b, c) / (2 * (dn - 2));
      case KFamily::QuasiConformal: {
        const double bb = kind.b_for(n);
        return (kind.a + bb) * div + (2 * kind.a - bb * (dn - 1) * (dn - 4)) / (2 * dn * (dn - 1)) * S(a, b, c);
      }
    }
    return div;
  });
}

/// Decomposition ∇_m K_abc^m = A ∇_m R_abc^m + B (a_ac ∇_b φ − a_bc ∇_a φ) with φ = R, a = g.
struct KDivergenceForm {
  double A = 0.0;
  double B = 0.0;
  TensorValue codazzi;       // a_bc
  TensorValue phi_gradient;  // ∇_a φ
};

inline KDivergenceForm k_divergence_form(const KKind& kind, int n) {
  check_k_dim(kind, n);
  const double dn = n;
  KDivergenceForm f;
  switch (kind.family) {
    case KFamily::Projective:
      f.A = (dn - 2) / (dn - 1);
      f.B = 0.0;
      break;
    case KFamily::Conformal:
      f.A = (dn - 3) / (dn - 2);
      f.B = -(dn - 3) / (2 * (dn - 1) * (dn - 2));
      break;
    case KFamily::Concircular:
      f.A = 1.0;
      f.B = -1.0 / (dn * (dn - 1));
      break;
    case KFamily::Conharmonic:
      f.A = (dn - 3) / (dn - 2);
      f.B = -1.0 / (2 * (dn - 2));
      break;
    case KFamily::QuasiConformal: {
      const double bb = kind.b_for(n);
      f.A = kind.a + bb;
      f.B = -(2 * kind.a - bb * (dn - 1) * (dn - 4)) / (2 * dn * (dn - 1));
      break;
    }
  }
  return f;
}

/// Same decomposition with a = g and ∇φ = ∇R filled from the point.
inline KDivergenceForm k_divergence_form(const CurvaturePoint& cp, const KKind& kind) {
  KDivergenceForm f = k_divergence_form(kind, cp.dim());
  f.codazzi = cp.metric.g;
  f.phi_gradient = nabla_scalar(cp);
  return f;
}

/// A ∇_m R_abc^m + B (a_ac ∇_b φ − a_bc ∇_a φ).
inline TensorValue reconstruct_divergence(const CurvaturePoint& cp, const KDivergenceForm& f) {
  const TensorValue div = riemann_divergence(cp).divergence;
  return TensorValue::generate(cp.dim(), covariant(3), [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2];
    return f.A * div(a, b, c) + f.B * (f.codazzi(a, c) * f.phi_gradient(b) - f.codazzi(b, c) * f.phi_gradient(a));
  });
}

struct KBianchi {
  TensorValue direct;   // ∇_a K_bcd^e + ∇_b K_cad^e + ∇_c K_abd^e from jets
  TensorValue formula;  // closed form (c)
  double discrepancy = 0.0;
  double relative = 0.0;
};

namespace detail {

// Closed form (c) for one kind; slots (a,b,c,d,e).
inline TensorValue k_bianchi_formula(const CurvaturePoint& cp, const KKind& kind, const CurvatureGradients& gr) {
  const int n = cp.dim();
  const double dn = n;
  const TensorValue& g = cp.metric.g;
  const TensorValue& div = gr.div;
  const TensorValue& dRU = gr.dric_up;
  const TensorValue& dR = gr.dR;
  Valence v = riemann_valence();
  v.insert(v.begin(), Variance::Covariant);
  auto delta_div = [&](int a, int b, int c, int d, int e) {
    return (a == e) * div(b, c, d) + (b == e) * div(c, a, d) + (c == e) * div(a, b, d);
  };
  auto ricci_bracket = [&](int a, int b, int c, int d, int e) {
    return g(c, d) * (dRU(a, b, e) - dRU(b, a, e)) + g(a, d) * (dRU(b, c, e) - dRU(c, b, e)) +
           g(b, d) * (dRU(c, a, e) - dRU(a, c, e));
  };
  auto scalar_bracket = [&](int a, int b, int c, int d, int e) {
    return (a == e) * (g(b, d) * dR(c) - g(c, d) * dR(b)) + (b == e) * (g(c, d) * dR(a) - g(a, d) * dR(c)) +
           (c == e) * (g(a, d) * dR(b) - g(b, d) * dR(a));
  };
  auto conformal = [&](int a, int b, int c, int d, int e) {
    return (delta_div(a, b, c, d, e) + ricci_bracket(a, b, c, d, e)) / (dn - 2) -
           scalar_bracket(a, b, c, d, e) / ((dn - 1) * (dn - 2));
  };
  auto concircular = [&](int a, int b, int c, int d, int e) { return scalar_bracket(a, b, c, d, e) / (dn * (dn - 1)); };
  return TensorValue::generate(n, v, [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], d = i[3], e = i[4];
    switch (kind.family) {
      case KFamily::Projective: return delta_div(a, b, c, d, e) / (dn - 1);
      case KFamily::Conformal: return conformal(a, b, c, d, e);
      case KFamily::Concircular: return concircular(a, b, c, d, e);
      case KFamily::Conharmonic:
        // the printed second term is incomplete; completed by the conformal pattern
        return (delta_div(a, b, c, d, e) + ricci_bracket(a, b, c, d, e)) / (dn - 2);
      case KFamily::QuasiConformal: {
        const double bb = kind.b_for(n);
        return -bb * (dn - 2) * conformal(a, b, c, d, e) + (kind.a + bb * (dn - 2)) * concircular(a, b, c, d, e);
      }
    }
    return 0.0;
  });
}

inline double summand_scale(std::initializer_list<const TensorValue*> ts) {
  double s = 0.0;
  for (const auto* t : ts) s = std::max(s, t->max_abs());
  return s;
}

}  // namespace detail

/// B_abcd^e computed directly and by closed form (c).
inline KBianchi k_bianchi_B(const CurvaturePoint& cp, const KKind& kind) {
  check_k_dim(kind, cp.dim());
  const JetTensor K = detail::k_jets(*cp.jets, kind, 1);
  const TensorValue dK = covariant_derivative(K, cp.jets->gamma).value();
  KBianchi out;
  out.direct = cyclic_sum(dK, {0, 1, 2});
  out.formula = detail::k_bianchi_formula(cp, kind, detail::gradients(cp));
  out.discrepancy = max_abs_diff(out.direct, out.formula);
  out.relative = out.discrepancy / std::max(1.0, detail::summand_scale({&dK, &out.formula}));
  return out;
}

struct KDivB {
  TensorValue formula;  // closed form (d), slots (a,b,c,d)
  TensorValue direct;   // divergence of the directly computed B
  double discrepancy = 0.0;
  double relative = 0.0;
};

/// cyc_abc ∇_a ∇_p R_bcd^p with slots (a,b,c,d).
inline TensorValue cyclic_nabla_div_riemann(const CurvaturePoint& cp) {
  const int n = cp.dim();
  const TensorValue& N2 = cp.nabla2_riemann;
  return TensorValue::generate(n, covariant(4), [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], d = i[3];
    double s = 0.0;
    for (int p = 0; p < n; ++p) s += N2(a, p, b, c, d, p) + N2(b, p, c, a, d, p) + N2(c, p, a, b, d, p);
    return s;
  });
}

/// ∇_m B_abcd^m by closed form (d), with the direct value for comparison.
inline KDivB k_div_B(const CurvaturePoint& cp, const KKind& kind) {
  const int n = cp.dim();
  check_k_dim(kind, n);
  const double dn = n;
  double factor = 0.0;
  switch (kind.family) {
    case KFamily::Projective: factor = 1.0 / (dn - 1); break;
    case KFamily::Conformal:
    case KFamily::Conharmonic: factor = 1.0 / (dn - 2); break;
    case KFamily::Concircular: factor = 0.0; break;
    case KFamily::QuasiConformal: factor = -kind.b_for(n); break;
  }
  KDivB out;
  out.formula = factor == 0.0 ? TensorValue(n, covariant(4)) : cyclic_nabla_div_riemann(cp) * factor;
  const TensorValue N2K = k_derivatives(cp, kind).nabla2;
  out.direct = TensorValue::generate(n, covariant(4), [&](const Index& i) {
    const int a = i[0], b = i[1], c = i[2], d = i[3];
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += N2K(m, a, b, c, d, m) + N2K(m, b, c, a, d, m) + N2K(m, c, a, b, d, m);
    return s;
  });
  out.discrepancy = max_abs_diff(out.direct, out.formula);
  out.relative = out.discrepancy / std::max(1.0, detail::summand_scale({&N2K, &out.formula}));
  return out;
}

}  // namespace curv
