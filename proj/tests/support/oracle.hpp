#pragma once

// Independent reference values built from plain double evaluation and
// central finite differences. Nothing here touches jets.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "curv/expr.hpp"
#include "curv/metric_dsl.hpp"

namespace oracle {

inline double eval(const curv::Expr& e, std::span<const double> x, std::span<const double> p) {
  using curv::BinaryOp;
  using curv::ExprKind;
  using curv::Function;
  switch (e.kind) {
    case ExprKind::Constant: return e.value;
    case ExprKind::Coordinate: return x[e.slot];
    case ExprKind::Parameter: return p[e.slot];
    case ExprKind::Neg: return -eval(*e.lhs, x, p);
    case ExprKind::Binary: {
      const double a = eval(*e.lhs, x, p);
      const double b = eval(*e.rhs, x, p);
      switch (e.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return std::pow(a, b);
      }
      break;
    }
    case ExprKind::Call: {
      const double a = eval(*e.lhs, x, p);
      switch (e.fn) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Tan: return std::tan(a);
        case Function::Exp: return std::exp(a);
        case Function::Log: return std::log(a);
        case Function::Sqrt: return std::sqrt(a);
        case Function::Sinh: return std::sinh(a);
        case Function::Cosh: return std::cosh(a);
        case Function::Tanh: return std::tanh(a);
      }
      break;
    }
  }
  throw std::logic_error("unhandled expression node");
}

using Point = std::vector<double>;
using Scalar = std::function<double(const Point&)>;

/// 4th-order central first derivative.
inline double d1(const Scalar& f, Point x, int i, double h) {
  const double x0 = x[i];
  auto at = [&](double s) {
    x[i] = x0 + s * h;
    return f(x);
  };
  return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
}

/// 4th-order central second derivative, pure or mixed.
inline double d2(const Scalar& f, const Point& x, int i, int j, double h) {
  if (i == j) {
    Point y = x;
    auto at = [&](double s) {
      y[i] = x[i] + s * h;
      return f(y);
    };
    return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
  }
  return d1([&](const Point& y) { return d1(f, y, j, h); }, x, i, h);
}

inline double component(const curv::MetricSpec& s, int a, int b, const Point& x) {
  const auto& e = s.component(a, b);
  if (!e) return 0.0;
  const auto p = s.param_values();
  return eval(*e, x, p);
}

inline Eigen::MatrixXd metric(const curv::MetricSpec& s, const Point& x) {
  Eigen::MatrixXd g(s.dim, s.dim);
  for (int a = 0; a < s.dim; ++a)
    for (int b = 0; b < s.dim; ++b) g(a, b) = component(s, a, b, x);
  return g;
}

/// Γ^d_bc stored as gamma[(b*n + c)*n + d].
inline std::vector<double> christoffel(const curv::MetricSpec& s, const Point& x, double h = 1e-4) {
  const int n = s.dim;
  std::vector<double> dg(n * n * n);  // dg[(k*n + a)*n + b] = ∂_k g_ab
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        dg[(k * n + a) * n + b] = d1([&](const Point& y) { return component(s, a, b, y); }, x, k, h);
  const Eigen::MatrixXd ginv = metric(s, x).inverse();
  std::vector<double> gamma(n * n * n, 0.0);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
          acc += 0.5 * ginv(d, m) *
                 (dg[(b * n + m) * n + c] + dg[(c * n + m) * n + b] - dg[(m * n + b) * n + c]);
        }
        gamma[(b * n + c) * n + d] = acc;
      }
  return gamma;
}

/// R_abc^d = ∂_aΓ^d_bc − ∂_bΓ^d_ac − Γ^k_acΓ^d_bk + Γ^d_akΓ^k_bc, flat index ((a*n+b)*n+c)*n+d.
inline std::vector<double> riemann(const curv::MetricSpec& s, const Point& x, double h_outer = 1e-3,
                                   double h_inner = 1e-3) {
  const int n = s.dim;
  auto G = [&](const Point& y) { return christoffel(s, y, h_inner); };
  // dG[(e*n^3) + idx] = ∂_e Γ[idx]
  const int n3 = n * n * n;
  std::vector<double> dG(n * n3);
  for (int e = 0; e < n; ++e) {
    std::vector<std::vector<double>> samples;
    for (double st : {2.0, 1.0, -1.0, -2.0}) {
      Point y = x;
      y[e] += st * h_outer;
      samples.push_back(G(y));
    }
    for (int i = 0; i < n3; ++i)
      dG[e * n3 + i] = (-samples[0][i] + 8 * samples[1][i] - 8 * samples[2][i] + samples[3][i]) / (12 * h_outer);
  }
  const auto g0 = G(x);
  auto gam = [&](int b, int c, int d) { return g0[(b * n + c) * n + d]; };
  auto dgam = [&](int e, int b, int c, int d) { return dG[e * n3 + (b * n + c) * n + d]; };
  std::vector<double> R(n * n3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dgam(a, b, c, d) - dgam(b, a, c, d);
          for (int k = 0; k < n; ++k) v += -gam(a, c, k) * gam(b, k, d) + gam(a, k, d) * gam(b, c, k);
          R[((a * n + b) * n + c) * n + d] = v;
        }
  return R;
}

/// Relative agreement used throughout: |a − b| ≤ tol · max(1, |b|).
inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace oracle
