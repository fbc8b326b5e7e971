#pragma once

// Expression trees for metric components, with a double evaluator and a jet
// evaluator. Trees are immutable and shared.

#include <charconv>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curv/errors.hpp"
#include "curv/jet.hpp"

namespace curv {

enum class ExprKind { Constant, Coordinate, Parameter, Neg, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Constant;
  double value = 0.0;       // Constant
  std::string name;         // Coordinate / Parameter
  int slot = -1;            // coordinate index or parameter index
  BinaryOp op = BinaryOp::Add;
  Function fn = Function::Sin;
  ExprPtr lhs;              // Neg and Call use lhs only
  ExprPtr rhs;

  static ExprPtr constant(double v) {
    auto e = std::make_shared<Expr>();
    e->value = v;
    return e;
  }
  static ExprPtr coordinate(std::string n, int index) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Coordinate;
    e->name = std::move(n);
    e->slot = index;
    return e;
  }
  static ExprPtr parameter(std::string n, int index) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Parameter;
    e->name = std::move(n);
    e->slot = index;
    return e;
  }
  static ExprPtr neg(ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Neg;
    e->lhs = std::move(child);
    return e;
  }
  static ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }
  static ExprPtr call(Function f, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Call;
    e->fn = f;
    e->lhs = std::move(arg);
    return e;
  }
};

inline constexpr std::string_view function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Sinh: return "sinh";
    case Function::Cosh: return "cosh";
    case Function::Tanh: return "tanh";
  }
  return "?";
}

inline bool function_from_name(std::string_view s, Function& out) {
  for (Function f : {Function::Sin, Function::Cos, Function::Tan, Function::Exp, Function::Log,
                     Function::Sqrt, Function::Sinh, Function::Cosh, Function::Tanh}) {
    if (function_name(f) == s) {
      out = f;
      return true;
    }
  }
  return false;
}

/// Structural equality; source positions are not part of a tree.
inline bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant: return a.value == b.value;
    case ExprKind::Coordinate:
    case ExprKind::Parameter: return a.name == b.name && a.slot == b.slot;
    case ExprKind::Neg: return equal(*a.lhs, *b.lhs);
    case ExprKind::Binary: return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case ExprKind::Call: return a.fn == b.fn && equal(*a.lhs, *b.lhs);
  }
  return false;
}

inline bool depends_on_coordinates(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Coordinate: return true;
    case ExprKind::Constant:
    case ExprKind::Parameter: return false;
    case ExprKind::Neg:
    case ExprKind::Call: return depends_on_coordinates(*e.lhs);
    case ExprKind::Binary: return depends_on_coordinates(*e.lhs) || depends_on_coordinates(*e.rhs);
  }
  return true;
}

namespace detail {

// Precedence levels of the grammar: 1 = sum, 2 = product, 3 = unary minus,
// 4 = power, 5 = atom. Unary minus binds tighter than '^' on its base.
inline int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Binary:
      switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 0;
    case ExprKind::Neg: return 3;
    default: return 5;
  }
}

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Prints with the minimal parentheses that reparse to the same tree.
inline std::string to_string(const Expr& e) {
  auto wrap = [](const Expr& child, bool parens) {
    return parens ? "(" + to_string(child) + ")" : to_string(child);
  };
  switch (e.kind) {
    case ExprKind::Constant: return detail::format_real(e.value);
    case ExprKind::Coordinate:
    case ExprKind::Parameter: return e.name;
    case ExprKind::Neg: {
      const int p = detail::precedence(*e.lhs);
      return "-" + wrap(*e.lhs, p != 3 && p != 5);
    }
    case ExprKind::Call:
      return std::string(function_name(e.fn)) + "(" + to_string(*e.lhs) + ")";
    case ExprKind::Binary: {
      const int p = detail::precedence(e);
      const int pl = detail::precedence(*e.lhs);
      const int pr = detail::precedence(*e.rhs);
      if (e.op == BinaryOp::Pow) {
        // base is a unary, exponent is a factor (unary or power)
        return wrap(*e.lhs, pl != 3 && pl != 5) + "^" + wrap(*e.rhs, pr < 3);
      }
      const char* sym = e.op == BinaryOp::Add   ? "+"
                        : e.op == BinaryOp::Sub ? "-"
                        : e.op == BinaryOp::Mul ? "*"
                                                : "/";
      return wrap(*e.lhs, pl < p) + sym + wrap(*e.rhs, pr <= p);
    }
  }
  return "?";
}

/// Evaluates in double precision at a coordinate point.
inline double evaluate(const Expr& e, std::span<const double> coords, std::span<const double> params) {
  switch (e.kind) {
    case ExprKind::Constant: return e.value;
    case ExprKind::Coordinate: return coords[e.slot];
    case ExprKind::Parameter: return params[e.slot];
    case ExprKind::Neg: return -evaluate(*e.lhs, coords, params);
    case ExprKind::Binary: {
      const double a = evaluate(*e.lhs, coords, params);
      const double b = evaluate(*e.rhs, coords, params);
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
      const double x = evaluate(*e.lhs, coords, params);
      switch (e.fn) {
        case Function::Sin: return std::sin(x);
        case Function::Cos: return std::cos(x);
        case Function::Tan: return std::tan(x);
        case Function::Exp: return std::exp(x);
        case Function::Log: return std::log(x);
        case Function::Sqrt: return std::sqrt(x);
        case Function::Sinh: return std::sinh(x);
        case Function::Cosh: return std::cosh(x);
        case Function::Tanh: return std::tanh(x);
      }
      break;
    }
  }
  return std::nan("");
}

inline constexpr int kMaxExpandedExponent = 12;

/// Evaluates as a jet. `coords` are the jets of the coordinate functions.
inline Jet evaluate_jet(const Expr& e, std::span<const Jet> coords, std::span<const double> params) {
  const int dim = coords.front().dim();
  const int order = coords.front().order();
  switch (e.kind) {
    case ExprKind::Constant: return Jet::constant(dim, order, e.value);
    case ExprKind::Coordinate: return coords[e.slot];
    case ExprKind::Parameter: return Jet::constant(dim, order, params[e.slot]);
    case ExprKind::Neg: return -evaluate_jet(*e.lhs, coords, params);
    case ExprKind::Binary: {
      if (e.op == BinaryOp::Pow) {
        const Jet base = evaluate_jet(*e.lhs, coords, params);
        if (!depends_on_coordinates(*e.rhs)) {
          const double r = evaluate(*e.rhs, {}, params);
          if (std::floor(r) == r && std::abs(r) <= kMaxExpandedExponent) {
            return pow_int(base, static_cast<int>(r));
          }
          return pow_const(base, r);
        }
        // b^x = exp(x log b); log rejects a non-positive base at this point.
        return exp(evaluate_jet(*e.rhs, coords, params) * log(base));
      }
      const Jet a = evaluate_jet(*e.lhs, coords, params);
      const Jet b = evaluate_jet(*e.rhs, coords, params);
      switch (e.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: break;
      }
      break;
    }
    case ExprKind::Call: {
      const Jet x = evaluate_jet(*e.lhs, coords, params);
      switch (e.fn) {
        case Function::Sin: return sin(x);
        case Function::Cos: return cos(x);
        case Function::Tan: return tan(x);
        case Function::Exp: return exp(x);
        case Function::Log: return log(x);
        case Function::Sqrt: return sqrt(x);
        case Function::Sinh: return sinh(x);
        case Function::Cosh: return cosh(x);
        case Function::Tanh: return tanh(x);
      }
      break;
    }
  }
  throw ArgumentError("malformed expression");
}

}  // namespace curv
