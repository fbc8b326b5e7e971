#pragma once

// Line-oriented metric file format.
//
//   file    := line*
//   line    := "dim" INT | "name" IDENT | "coords" IDENT+ | "param" IDENT REAL
//            | "domain" IDENT REAL REAL | "g" INT INT EXPR
//   EXPR    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := unary ('^' factor)?
//   unary   := '-' unary | atom
//   atom    := REAL | IDENT | IDENT '(' EXPR ')' | '(' EXPR ')'
//
// '#' starts a comment. Identifiers may contain UTF-8 letters.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "curv/errors.hpp"
#include "curv/expr.hpp"
#include "curv/jet.hpp"

namespace curv {

enum class ParseErrorKind {
  Syntax,
  UnknownIdentifier,
  DimMismatch,
  InconsistentSymmetry,
  MissingDomain,
  MissingDirective,
  DuplicateDefinition,
  InvalidValue,
};

inline constexpr std::string_view parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::UnknownIdentifier: return "unknown identifier";
    case ParseErrorKind::DimMismatch: return "dimension mismatch";
    case ParseErrorKind::InconsistentSymmetry: return "inconsistent symmetric component";
    case ParseErrorKind::MissingDomain: return "missing domain";
    case ParseErrorKind::MissingDirective: return "missing directive";
    case ParseErrorKind::DuplicateDefinition: return "duplicate definition";
    case ParseErrorKind::InvalidValue: return "invalid value";
  }
  return "error";
}

class MetricParseError : public Error {
 public:
  MetricParseError(ParseErrorKind kind, int line, int column, const std::string& detail)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              std::string(parse_error_kind_name(kind)) + ": " + detail),
        kind_(kind),
        line_(line),
        column_(column) {}

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr int kMaxMetricDim = kMaxJetDim;

struct MetricSpec {
  std::string name = "unnamed";
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<std::pair<std::string, double>> params;  // declaration order
  std::vector<Interval> domain;                        // one per coordinate
  std::vector<ExprPtr> components;                     // dim*dim, null means 0

  const ExprPtr& component(int a, int b) const { return components[a * dim + b]; }

  std::vector<double> param_values() const {
    std::vector<double> v;
    for (const auto& p : params) v.push_back(p.second);
    return v;
  }

  bool contains(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != dim) return false;
    for (int i = 0; i < dim; ++i) {
      if (!(point[i] >= domain[i].lo && point[i] <= domain[i].hi)) return false;
    }
    return true;
  }
};

/// Component-by-component structural equality.
inline bool same_spec(const MetricSpec& a, const MetricSpec& b) {
  if (a.name != b.name || a.dim != b.dim || a.coords != b.coords || a.params != b.params ||
      a.domain != b.domain || a.components.size() != b.components.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    const auto& x = a.components[i];
    const auto& y = b.components[i];
    if (static_cast<bool>(x) != static_cast<bool>(y)) return false;
    if (x && !equal(*x, *y)) return false;
  }
  return true;
}

namespace detail {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  bool integral = false;
  int column = 1;
};

// Tokenizer over one line. Columns count UTF-8 code points, 1-based.
class LineLexer {
 public:
  LineLexer(std::string_view line, int line_no) : s_(line), line_(line_no) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  int line() const { return line_; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw MetricParseError(ParseErrorKind::Syntax, line_, t.column, what);
  }

 private:
  int column_at(std::size_t pos) const {
    int col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if ((static_cast<unsigned char>(s_[i]) & 0xC0) != 0x80) ++col;
    }
    return col;
  }

  static bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
  static bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

  void advance() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    tok_ = Token{};
    tok_.column = column_at(pos_);
    if (pos_ >= s_.size() || s_[pos_] == '#') {
      tok_.kind = Tok::End;
      pos_ = s_.size();
      return;
    }
    const auto c = static_cast<unsigned char>(s_[pos_]);
    if (ident_start(c)) {
      std::size_t e = pos_;
      while (e < s_.size() && ident_char(static_cast<unsigned char>(s_[e]))) ++e;
      tok_.kind = Tok::Ident;
      tok_.text = std::string(s_.substr(pos_, e - pos_));
      pos_ = e;
      return;
    }
    if (std::isdigit(c) || (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      std::size_t e = pos_;
      bool integral = true;
      while (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) ++e;
      if (e < s_.size() && s_[e] == '.') {
        integral = false;
        ++e;
        while (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) ++e;
      }
      if (e < s_.size() && (s_[e] == 'e' || s_[e] == 'E')) {
        std::size_t k = e + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          integral = false;
          while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
          e = k;
        }
      }
      tok_.kind = Tok::Number;
      tok_.text = std::string(s_.substr(pos_, e - pos_));
      tok_.integral = integral;
      tok_.number = std::strtod(tok_.text.c_str(), nullptr);
      pos_ = e;
      return;
    }
    if (std::string_view("+-*/^()").find(static_cast<char>(c)) != std::string_view::npos) {
      tok_.kind = Tok::Symbol;
      tok_.text = std::string(1, static_cast<char>(c));
      ++pos_;
      return;
    }
    throw MetricParseError(ParseErrorKind::Syntax, line_, tok_.column,
                           "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  Token tok_;
};

// Identifiers are left unresolved (slot = -1, kind Coordinate) and carry their
// position so that resolution errors can point at them.
struct PendingName {
  Expr* node;
  int line;
  int column;
};

class ExprParser {
 public:
  ExprParser(LineLexer& lex, std::vector<PendingName>& names) : lex_(lex), names_(names) {}

  ExprPtr parse_expr() {
    ExprPtr left = parse_term();
    while (is_symbol("+") || is_symbol("-")) {
      const BinaryOp op = lex_.take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      left = Expr::binary(op, left, parse_term());
    }
    return left;
  }

 private:
  bool is_symbol(const char* s) const {
    return lex_.peek().kind == Tok::Symbol && lex_.peek().text == s;
  }

  ExprPtr parse_term() {
    ExprPtr left = parse_factor();
    while (is_symbol("*") || is_symbol("/")) {
      const BinaryOp op = lex_.take().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      left = Expr::binary(op, left, parse_factor());
    }
    return left;
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_unary();
    if (is_symbol("^")) {
      lex_.take();
      return Expr::binary(BinaryOp::Pow, base, parse_factor());
    }
    return base;
  }

  ExprPtr parse_unary() {
    if (is_symbol("-")) {
      lex_.take();
      return Expr::neg(parse_unary());
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token t = lex_.take();
    if (t.kind == Tok::Number) return Expr::constant(t.number);
    if (t.kind == Tok::Ident) {
      if (is_symbol("(")) {
        Function f;
        if (!function_from_name(t.text, f)) {
          throw MetricParseError(ParseErrorKind::UnknownIdentifier, lex_.line(), t.column,
                                 "unknown function '" + t.text + "'");
        }
        lex_.take();
        ExprPtr arg = parse_expr();
        expect_close();
        return Expr::call(f, arg);
      }
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Coordinate;
      e->name = t.text;
      names_.push_back({e.get(), lex_.line(), t.column});
      return e;
    }
    if (t.kind == Tok::Symbol && t.text == "(") {
      ExprPtr inner = parse_expr();
      expect_close();
      return inner;
    }
    lex_.fail(t, t.kind == Tok::End ? "unexpected end of expression" : "unexpected '" + t.text + "'");
  }

  void expect_close() {
    const Token t = lex_.take();
    if (t.kind != Tok::Symbol || t.text != ")") lex_.fail(t, "expected ')'");
  }

  LineLexer& lex_;
  std::vector<PendingName>& names_;
};

struct ComponentLine {
  int a, b;
  ExprPtr expr;
  int line, column;
};

}  // namespace detail

/// Parses a metric file. Throws MetricParseError with line/column.
inline MetricSpec parse_metric(std::string_view text) {
  using detail::Tok;
  MetricSpec spec;
  std::optional<int> dim;
  int dim_line = 0, coords_line = 0;
  std::map<std::string, std::pair<Interval, std::pair<int, int>>> domains;
  std::vector<detail::ComponentLine> comps;
  std::vector<detail::PendingName> names;
  bool have_coords = false;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    detail::LineLexer lex(line, line_no);
    if (lex.peek().kind == Tok::End) {
      if (end == text.size()) break;
      continue;
    }
    const detail::Token kw = lex.take();
    if (kw.kind != Tok::Ident) lex.fail(kw, "expected a directive");

    auto take_int = [&]() {
      const detail::Token t = lex.take();
      if (t.kind != Tok::Number || !t.integral) lex.fail(t, "expected an integer");
      return std::pair<int, int>{static_cast<int>(t.number), t.column};
    };
    auto take_real = [&]() {
      bool negative = false;
      if (lex.peek().kind == Tok::Symbol && lex.peek().text == "-") {
        lex.take();
        negative = true;
      }
      const detail::Token t = lex.take();
      if (t.kind != Tok::Number) lex.fail(t, "expected a number");
      return negative ? -t.number : t.number;
    };
    auto take_ident = [&]() {
      const detail::Token t = lex.take();
      if (t.kind != Tok::Ident) lex.fail(t, "expected an identifier");
      return t;
    };
    auto expect_end = [&]() {
      if (lex.peek().kind != Tok::End) lex.fail(lex.peek(), "unexpected trailing input");
    };

    if (kw.text == "dim") {
      if (dim) throw MetricParseError(ParseErrorKind::DuplicateDefinition, line_no, kw.column, "dim given twice");
      const auto [n, col] = take_int();
      if (n < 1 || n > kMaxMetricDim) {
        throw MetricParseError(ParseErrorKind::InvalidValue, line_no, col, "dim must be in 1..6");
      }
      dim = n;
      dim_line = line_no;
      expect_end();
    } else if (kw.text == "name") {
      spec.name = take_ident().text;
      expect_end();
    } else if (kw.text == "coords") {
      if (have_coords) {
        throw MetricParseError(ParseErrorKind::DuplicateDefinition, line_no, kw.column, "coords given twice");
      }
      have_coords = true;
      coords_line = line_no;
      while (lex.peek().kind != Tok::End) {
        const auto t = take_ident();
        for (const auto& c : spec.coords) {
          if (c == t.text) {
            throw MetricParseError(ParseErrorKind::DuplicateDefinition, line_no, t.column,
                                   "coordinate '" + t.text + "' listed twice");
          }
        }
        spec.coords.push_back(t.text);
      }
      if (spec.coords.empty()) lex.fail(lex.peek(), "expected coordinate names");
    } else if (kw.text == "param") {
      const auto t = take_ident();
      const double v = take_real();
      expect_end();
      for (const auto& p : spec.params) {
        if (p.first == t.text) {
          throw MetricParseError(ParseErrorKind::DuplicateDefinition, line_no, t.column,
                                 "parameter '" + t.text + "' defined twice");
        }
      }
      spec.params.emplace_back(t.text, v);
    } else if (kw.text == "domain") {
      const auto t = take_ident();
      const double lo = take_real();
      const double hi = take_real();
      expect_end();
      if (!(lo < hi)) {
        throw MetricParseError(ParseErrorKind::InvalidValue, line_no, t.column, "domain needs lo < hi");
      }
      if (domains.count(t.text)) {
        throw MetricParseError(ParseErrorKind::DuplicateDefinition, line_no, t.column,
                               "domain for '" + t.text + "' given twice");
      }
      domains[t.text] = {Interval{lo, hi}, {line_no, t.column}};
    } else if (kw.text == "g") {
      const auto [a, ca] = take_int();
      const auto b = take_int().first;
      detail::ExprParser p(lex, names);
      ExprPtr e = p.parse_expr();
      expect_end();
      comps.push_back({a, b, e, line_no, ca});
    } else {
      throw MetricParseError(ParseErrorKind::Syntax, line_no, kw.column, "unknown directive '" + kw.text + "'");
    }
    if (end == text.size()) break;
  }

  if (!dim) throw MetricParseError(ParseErrorKind::MissingDirective, line_no, 1, "no 'dim' directive");
  if (!have_coords) throw MetricParseError(ParseErrorKind::MissingDirective, line_no, 1, "no 'coords' directive");
  spec.dim = *dim;
  const int n = spec.dim;
  if (static_cast<int>(spec.coords.size()) != n) {
    throw MetricParseError(ParseErrorKind::DimMismatch, coords_line, 1,
                           "dim is " + std::to_string(n) + " (line " + std::to_string(dim_line) + ") but " +
                               std::to_string(spec.coords.size()) + " coordinates are listed");
  }
  for (const auto& p : spec.params) {
    for (const auto& c : spec.coords) {
      if (p.first == c) {
        throw MetricParseError(ParseErrorKind::DuplicateDefinition, coords_line, 1,
                               "'" + c + "' is both a coordinate and a parameter");
      }
    }
  }

  // Resolve identifiers; collect which coordinates the expressions use.
  std::vector<bool> used(n, false);
  std::vector<std::pair<int, int>> first_use(n, {0, 0});
  for (const auto& pn : names) {
    bool found = false;
    for (int i = 0; i < n; ++i) {
      if (spec.coords[i] == pn.node->name) {
        pn.node->kind = ExprKind::Coordinate;
        pn.node->slot = i;
        if (!used[i]) first_use[i] = {pn.line, pn.column};
        used[i] = true;
        found = true;
      }
    }
    for (std::size_t i = 0; !found && i < spec.params.size(); ++i) {
      if (spec.params[i].first == pn.node->name) {
        pn.node->kind = ExprKind::Parameter;
        pn.node->slot = static_cast<int>(i);
        found = true;
      }
    }
    if (!found) {
      throw MetricParseError(ParseErrorKind::UnknownIdentifier, pn.line, pn.column,
                             "'" + pn.node->name + "' is neither a coordinate nor a parameter");
    }
  }

  spec.domain.assign(n, Interval{0.0, 1.0});
  for (const auto& [nm, entry] : domains) {
    bool found = false;
    for (int i = 0; i < n; ++i) {
      if (spec.coords[i] == nm) {
        spec.domain[i] = entry.first;
        found = true;
      }
    }
    if (!found) {
      throw MetricParseError(ParseErrorKind::UnknownIdentifier, entry.second.first, entry.second.second,
                             "domain for unknown coordinate '" + nm + "'");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (used[i] && !domains.count(spec.coords[i])) {
      throw MetricParseError(ParseErrorKind::MissingDomain, first_use[i].first, first_use[i].second,
                             "coordinate '" + spec.coords[i] + "' appears in an expression but has no domain");
    }
  }

  spec.components.assign(static_cast<std::size_t>(n) * n, nullptr);
  std::vector<const detail::ComponentLine*> source(static_cast<std::size_t>(n) * n, nullptr);
  for (const auto& c : comps) {
    if (c.a < 0 || c.a >= n || c.b < 0 || c.b >= n) {
      throw MetricParseError(ParseErrorKind::DimMismatch, c.line, c.column,
                             "component index out of range for dim " + std::to_string(n));
    }
    for (const auto& [x, y] : {std::pair{c.a, c.b}, std::pair{c.b, c.a}}) {
      const auto* prev = source[x * n + y];
      if (prev && to_string(*prev->expr) != to_string(*c.expr)) {
        const auto kind = (prev->a == c.a && prev->b == c.b) ? ParseErrorKind::DuplicateDefinition
                                                               : ParseErrorKind::InconsistentSymmetry;
        throw MetricParseError(kind, c.line, c.column,
                               "g " + std::to_string(c.a) + " " + std::to_string(c.b) + " disagrees with line " +
                                   std::to_string(prev->line));
      }
      source[x * n + y] = &c;
      spec.components[x * n + y] = c.expr;
    }
  }
  return spec;
}

inline MetricSpec load_metric_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open metric file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric(ss.str());
}

/// Serializes to the file format; parse_metric(to_text(s)) reproduces s.
inline std::string to_text(const MetricSpec& spec) {
  std::string out;
  out += "name " + spec.name + "\n";
  out += "dim " + std::to_string(spec.dim) + "\n";
  out += "coords";
  for (const auto& c : spec.coords) out += " " + c;
  out += "\n";
  for (const auto& [nm, v] : spec.params) out += "param " + nm + " " + detail::format_real(v) + "\n";
  for (int i = 0; i < spec.dim; ++i) {
    out += "domain " + spec.coords[i] + " " + detail::format_real(spec.domain[i].lo) + " " +
           detail::format_real(spec.domain[i].hi) + "\n";
  }
  for (int a = 0; a < spec.dim; ++a) {
    for (int b = a; b < spec.dim; ++b) {
      if (const auto& e = spec.component(a, b)) {
        out += "g " + std::to_string(a) + " " + std::to_string(b) + " " + to_string(*e) + "\n";
      }
    }
  }
  return out;
}

/// Symmetric dim x dim matrix of jets, row-major.
struct JetMatrix {
  int dim = 0;
  std::vector<Jet> entries;
  const Jet& operator()(int a, int b) const { return entries[a * dim + b]; }
  Jet& operator()(int a, int b) { return entries[a * dim + b]; }
};

enum class DomainCheck { Enforce, Skip };

/// Evaluates every metric component as a jet of the given order at `point`.
inline JetMatrix eval_metric(const MetricSpec& spec, std::span<const double> point, int order,
                             DomainCheck check = DomainCheck::Enforce) {
  if (static_cast<int>(point.size()) != spec.dim) throw ArgumentError("point has the wrong dimension");
  if (order < 0 || order > kMaxJetOrder) throw ArgumentError("jet order must be in 0..4");
  if (check == DomainCheck::Enforce && !spec.contains(point)) {
    throw DomainError("point outside the sampling domain of metric '" + spec.name + "'");
  }
  std::vector<Jet> coords;
  for (int i = 0; i < spec.dim; ++i) coords.push_back(jet_variable(spec.dim, order, i, point[i]));
  const auto params = spec.param_values();

  JetMatrix g{spec.dim, {}};
  g.entries.assign(static_cast<std::size_t>(spec.dim) * spec.dim, Jet(spec.dim, order));
  for (int a = 0; a < spec.dim; ++a) {
    for (int b = a; b < spec.dim; ++b) {
      if (const auto& e = spec.component(a, b)) {
        Jet v = evaluate_jet(*e, coords, params);
        for (double c : v.coeffs()) {
          if (!std::isfinite(c)) throw SingularPointError("metric component is not finite at this point");
        }
        g(a, b) = v;
        g(b, a) = v;
      }
    }
  }
  return g;
}

}  // namespace curv
