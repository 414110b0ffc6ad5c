#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tvb {

/// Raised by parse() for malformed text. `offset()` is the byte offset of the
/// offending token in the input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Raised when an expression is evaluated outside the domain of one of its
/// nodes (division by zero, log/sqrt of a non-positive argument, ...).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ExprKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Function };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

struct ExprNode;

/// Immutable scalar expression over chart coordinates x_0 .. x_{d-1}.
///
/// Copies share the underlying tree. Every operation is pure, so an Expr may
/// be evaluated from several threads at once.
class Expr {
public:
  /// The zero constant.
  Expr();

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr function(Func f, Expr arg);
  /// base^exponent with a numeric exponent.
  static Expr power(Expr base, double exponent);

  ExprKind kind() const;
  const ExprNode& node() const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_constant(double v) const;

  double eval(std::span<const double> point) const;

  /// Exact symbolic partial derivative with respect to coordinate `coord`,
  /// already passed through simplify().
  Expr differentiate(int coord) const;

  Expr simplify() const;

  /// Text form that parse() maps back to the same tree.
  std::string to_string(std::span<const std::string> coords) const;
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  /// Number of nodes in the tree.
  std::size_t size() const;

  /// Highest variable index referenced, or -1 when the expression is constant.
  int max_variable() const;

private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  static Expr make(ExprNode node);
  static Expr binary(ExprKind kind, const Expr& a, const Expr& b);

  std::shared_ptr<const ExprNode> node_;

  friend Expr operator-(const Expr& a);
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
};

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  double value = 0.0;  // constant value or Pow exponent
  int index = 0;       // Variable index
  Func func = Func::Sin;
  Expr lhs;
  Expr rhs;
};

// Raw tree builders; no simplification happens here.
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

/// Parse `text` over the given coordinate names.
///
/// Grammar, loosest to tightest:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' exponent)*
///   primary := number | coord | func '(' sum ')' | '(' sum ')'
///   exponent:= ['-'] number | '(' ['-'] number ')'
/// with func one of sin, cos, tan, exp, log, sqrt. So `-x^2` is `-(x^2)`.
Expr parse(std::string_view text, std::span<const std::string> coords);

std::string_view function_name(Func f);

}  // namespace tvb
