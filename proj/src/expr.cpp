#include "tvb/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace tvb {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 6> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
}};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string_view function_name(Func f) {
  for (const auto& [name, fn] : kFunctions) {
    if (fn == f) return name;
  }
  return "?";
}

// ExprNode holds Expr members, so the default Expr cannot allocate a node while
// ExprNode is being default-constructed. A null pointer therefore stands for
// the constant 0 and node() resolves it lazily.
Expr::Expr() = default;

const ExprNode& Expr::node() const {
  static const ExprNode zero{};
  return node_ ? *node_ : zero;
}

Expr Expr::make(ExprNode node) { return Expr(std::make_shared<const ExprNode>(std::move(node))); }

Expr Expr::constant(double value) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.value = value;
  return make(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.index = index;
  return make(std::move(n));
}

Expr Expr::function(Func f, Expr arg) {
  ExprNode n;
  n.kind = ExprKind::Function;
  n.func = f;
  n.lhs = std::move(arg);
  return make(std::move(n));
}

Expr Expr::power(Expr base, double exponent) {
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.value = exponent;
  n.lhs = std::move(base);
  return make(std::move(n));
}

ExprKind Expr::kind() const { return node().kind; }

bool Expr::is_constant(double v) const { return is_constant() && node().value == v; }

Expr Expr::binary(ExprKind kind, const Expr& a, const Expr& b) {
  ExprNode n;
  n.kind = kind;
  n.lhs = a;
  n.rhs = b;
  return make(std::move(n));
}

Expr operator-(const Expr& a) {
  ExprNode n;
  n.kind = ExprKind::Negate;
  n.lhs = a;
  return Expr::make(std::move(n));
}
Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(ExprKind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(ExprKind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(ExprKind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(ExprKind::Div, a, b); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const Expr& e, const std::string& what) {
  throw DomainError(what + " in '" + e.to_string() + "'");
}

}  // namespace

double Expr::eval(std::span<const double> point) const {
  const ExprNode& n = node();
  switch (n.kind) {
    case ExprKind::Constant:
      return n.value;
    case ExprKind::Variable:
      if (static_cast<std::size_t>(n.index) >= point.size()) {
        throw std::out_of_range("variable x" + std::to_string(n.index) + " outside point of size " +
                                std::to_string(point.size()));
      }
      return point[n.index];
    case ExprKind::Negate:
      return -n.lhs.eval(point);
    case ExprKind::Add:
      return n.lhs.eval(point) + n.rhs.eval(point);
    case ExprKind::Sub:
      return n.lhs.eval(point) - n.rhs.eval(point);
    case ExprKind::Mul:
      return n.lhs.eval(point) * n.rhs.eval(point);
    case ExprKind::Div: {
      const double den = n.rhs.eval(point);
      if (den == 0.0) domain_fail(*this, "division by zero");
      return n.lhs.eval(point) / den;
    }
    case ExprKind::Pow: {
      const double base = n.lhs.eval(point);
      const bool integral = std::floor(n.value) == n.value;
      if (!integral && base < 0.0) domain_fail(*this, "non-integer power of a negative base");
      if (n.value < 0.0 && base == 0.0) domain_fail(*this, "negative power of zero");
      return std::pow(base, n.value);
    }
    case ExprKind::Function: {
      const double x = n.lhs.eval(point);
      switch (n.func) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan: {
          const double c = std::cos(x);
          if (c == 0.0) domain_fail(*this, "tan pole");
          return std::sin(x) / c;
        }
        case Func::Exp: return std::exp(x);
        case Func::Log:
          if (x <= 0.0) domain_fail(*this, "log of non-positive argument");
          return std::log(x);
        case Func::Sqrt:
          if (x < 0.0) domain_fail(*this, "sqrt of negative argument");
          return std::sqrt(x);
      }
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

bool finite(double v) { return std::isfinite(v); }

Expr fold_or(const Expr& e) {
  // Constant subtree: fold when evaluation is well defined.
  try {
    const double v = e.eval({});
    if (finite(v)) return Expr::constant(v);
  } catch (const DomainError&) {
  }
  return e;
}

}  // namespace

Expr Expr::simplify() const {
  const ExprNode& n = node();
  switch (n.kind) {
    case ExprKind::Constant:
    case ExprKind::Variable:
      return *this;
    case ExprKind::Negate: {
      Expr a = n.lhs.simplify();
      if (a.is_constant()) return Expr::constant(-a.node().value);
      if (a.kind() == ExprKind::Negate) return a.node().lhs;
      return -a;
    }
    case ExprKind::Add: {
      Expr a = n.lhs.simplify();
      Expr b = n.rhs.simplify();
      if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value + b.node().value);
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      if (b.kind() == ExprKind::Negate) return (a - b.node().lhs).simplify();
      return a + b;
    }
    case ExprKind::Sub: {
      Expr a = n.lhs.simplify();
      Expr b = n.rhs.simplify();
      if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value - b.node().value);
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return (-b).simplify();
      if (a == b) return Expr::constant(0.0);
      return a - b;
    }
    case ExprKind::Mul: {
      Expr a = n.lhs.simplify();
      Expr b = n.rhs.simplify();
      if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value * b.node().value);
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return (-b).simplify();
      if (b.is_constant(-1.0)) return (-a).simplify();
      // Keep constants on the left and merge c1*(c2*x).
      if (b.is_constant()) std::swap(a, b);
      if (a.is_constant() && b.kind() == ExprKind::Mul && b.node().lhs.is_constant()) {
        return (Expr::constant(a.node().value * b.node().lhs.node().value) * b.node().rhs).simplify();
      }
      if (a.kind() == ExprKind::Negate && b.kind() == ExprKind::Negate) {
        return (a.node().lhs * b.node().lhs).simplify();
      }
      if (a == b) return Expr::power(a, 2.0);
      return a * b;
    }
    case ExprKind::Div: {
      Expr a = n.lhs.simplify();
      Expr b = n.rhs.simplify();
      if (a.is_constant() && b.is_constant() && b.node().value != 0.0) {
        return Expr::constant(a.node().value / b.node().value);
      }
      if (a.is_constant(0.0)) return Expr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      return a / b;
    }
    case ExprKind::Pow: {
      Expr a = n.lhs.simplify();
      if (n.value == 0.0) return Expr::constant(1.0);
      if (n.value == 1.0) return a;
      if (a.is_constant()) return fold_or(Expr::power(a, n.value));
      if (a.kind() == ExprKind::Pow) {
        // (b^p)^q = b^(pq) only when p is an integer and q an integer, so that
        // sign and domain are preserved.
        const double p = a.node().value;
        if (std::floor(p) == p && std::floor(n.value) == n.value) {
          return Expr::power(a.node().lhs, p * n.value).simplify();
        }
      }
      return Expr::power(a, n.value);
    }
    case ExprKind::Function: {
      Expr a = n.lhs.simplify();
      Expr f = Expr::function(n.func, a);
      if (a.is_constant()) return fold_or(f);
      return f;
    }
  }
  return *this;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::differentiate(int coord) const {
  if (coord < 0) throw std::invalid_argument("negative coordinate index");
  const ExprNode& n = node();
  const auto c = [](double v) { return Expr::constant(v); };
  Expr d;
  switch (n.kind) {
    case ExprKind::Constant:
      d = c(0.0);
      break;
    case ExprKind::Variable:
      d = c(n.index == coord ? 1.0 : 0.0);
      break;
    case ExprKind::Negate:
      d = -n.lhs.differentiate(coord);
      break;
    case ExprKind::Add:
      d = n.lhs.differentiate(coord) + n.rhs.differentiate(coord);
      break;
    case ExprKind::Sub:
      d = n.lhs.differentiate(coord) - n.rhs.differentiate(coord);
      break;
    case ExprKind::Mul:
      d = n.lhs.differentiate(coord) * n.rhs + n.lhs * n.rhs.differentiate(coord);
      break;
    case ExprKind::Div: {
      const Expr du = n.lhs.differentiate(coord);
      const Expr dv = n.rhs.differentiate(coord);
      if (dv.is_constant(0.0)) {
        d = du / n.rhs;
      } else {
        d = (du * n.rhs - n.lhs * dv) / Expr::power(n.rhs, 2.0);
      }
      break;
    }
    case ExprKind::Pow:
      d = c(n.value) * Expr::power(n.lhs, n.value - 1.0) * n.lhs.differentiate(coord);
      break;
    case ExprKind::Function: {
      const Expr& u = n.lhs;
      const Expr du = u.differentiate(coord);
      switch (n.func) {
        case Func::Sin: d = Expr::function(Func::Cos, u) * du; break;
        case Func::Cos: d = -(Expr::function(Func::Sin, u) * du); break;
        case Func::Tan: d = du / Expr::power(Expr::function(Func::Cos, u), 2.0); break;
        case Func::Exp: d = *this * du; break;
        case Func::Log: d = du / u; break;
        case Func::Sqrt: d = du / (c(2.0) * *this); break;
      }
      break;
    }
  }
  return d.simplify();
}

// ---------------------------------------------------------------------------
// Printing, comparison, misc

namespace {

void print(const Expr& e, std::span<const std::string> coords, std::string& out) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Constant:
      if (n.value < 0.0 || std::signbit(n.value)) {
        // No negative literals in the grammar; this never comes out of parse().
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case ExprKind::Variable:
      if (static_cast<std::size_t>(n.index) < coords.size()) {
        out += coords[n.index];
      } else {
        out += "x" + std::to_string(n.index + 1);
      }
      return;
    case ExprKind::Negate:
      out += "(-";
      print(n.lhs, coords, out);
      out += ")";
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      static constexpr std::array<std::string_view, 4> ops{" + ", " - ", " * ", " / "};
      out += "(";
      print(n.lhs, coords, out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(ExprKind::Add)];
      print(n.rhs, coords, out);
      out += ")";
      return;
    }
    case ExprKind::Pow:
      out += "(";
      print(n.lhs, coords, out);
      out += "^";
      out += n.value < 0.0 ? "(-" + format_number(-n.value) + ")" : format_number(n.value);
      out += ")";
      return;
    case ExprKind::Function:
      out += function_name(n.func);
      out += "(";
      print(n.lhs, coords, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string Expr::to_string(std::span<const std::string> coords) const {
  std::string out;
  print(*this, coords, out);
  return out;
}

std::string Expr::to_string() const { return to_string(std::span<const std::string>{}); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_ && a.node_) return true;
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Constant: return x.value == y.value;
    case ExprKind::Variable: return x.index == y.index;
    case ExprKind::Negate: return x.lhs == y.lhs;
    case ExprKind::Pow: return x.value == y.value && x.lhs == y.lhs;
    case ExprKind::Function: return x.func == y.func && x.lhs == y.lhs;
    default: return x.lhs == y.lhs && x.rhs == y.rhs;
  }
}

std::size_t Expr::size() const {
  const ExprNode& n = node();
  switch (n.kind) {
    case ExprKind::Constant:
    case ExprKind::Variable: return 1;
    case ExprKind::Negate:
    case ExprKind::Pow:
    case ExprKind::Function: return 1 + n.lhs.size();
    default: return 1 + n.lhs.size() + n.rhs.size();
  }
}

int Expr::max_variable() const {
  const ExprNode& n = node();
  switch (n.kind) {
    case ExprKind::Constant: return -1;
    case ExprKind::Variable: return n.index;
    case ExprKind::Negate:
    case ExprKind::Pow:
    case ExprKind::Function: return n.lhs.max_variable();
    default: return std::max(n.lhs.max_variable(), n.rhs.max_variable());
  }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  Expr run() {
    Expr e = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = e + product();
      } else if (accept('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr e = primary();
    while (accept('^')) e = Expr::power(e, exponent());
    return e;
  }

  double exponent() {
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_ws();
    const std::size_t at = pos_;
    auto v = number();
    if (!v) fail_at("exponent must be a numeric literal", at);
    if (paren) expect(')');
    return negative ? -*v : *v;
  }

  std::optional<double> number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) fail_at("malformed number", start);
    return v;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return Expr::constant(*number());
    if (ch == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == name) return Expr::variable(static_cast<int>(i));
      }
      for (const auto& [fname, f] : kFunctions) {
        if (fname == name) return call(f, name);
      }
      fail_at("unknown identifier '" + std::string(name) + "'", start);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  Expr call(Func f, std::string_view name) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '(' after " + std::string(name));
    ++pos_;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') fail(std::string(name) + " takes 1 argument, got 0");
    Expr arg = sum();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ',') fail(std::string(name) + " takes 1 argument, got more");
    expect(')');
    return Expr::function(f, arg);
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords) { return Parser(text, coords).run(); }

}  // namespace tvb
