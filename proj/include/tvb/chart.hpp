#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tvb/expr.hpp"
#include "tvb/tensor.hpp"

namespace tvb {

/// Raised when a point lies outside a chart's domain or a chart fails its
/// structural checks at a point (singular metric, incompatible J, ...).
class ChartDomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Open domain given as a conjunction of inequalities, e.g. "x4 > 0" or
/// "1 + exp(x1)*cos(x2) > 0 && x1 < 3". Each inequality `a > b` is stored as
/// the expression a - b; the empty predicate is all of R^d.
class Domain {
public:
  struct Constraint {
    Expr slack;  // > 0 (or >= 0 when not strict) inside the domain
    bool strict = true;
    std::string text;
  };

  Domain() = default;
  static Domain parse(std::string_view text, std::span<const std::string> coords);

  /// True when every constraint holds with at least `margin` of slack.
  /// Strict constraints with margin 0 require slack > 0.
  bool contains(std::span<const double> point, double margin = 0.0) const;

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::string& text() const { return text_; }

private:
  std::vector<Constraint> constraints_;
  std::string text_;
};

/// Closed-form almost Hermitian chart: metric components g_ij and the
/// endomorphism J with (J v)^i = sum_j J^i_j v^j, both as expressions in the
/// chart coordinates. Matrices are stored row-major.
struct ChartSpec {
  std::string name;
  std::vector<std::string> coords;
  Domain domain;
  std::vector<Expr> g;
  std::vector<Expr> J;

  int dim() const { return static_cast<int>(coords.size()); }
  /// Complex dimension n, real dimension 2n.
  int n() const { return dim() / 2; }
  const Expr& g_at(int i, int j) const { return g[static_cast<std::size_t>(i * dim() + j)]; }
  const Expr& J_at(int i, int j) const { return J[static_cast<std::size_t>(i * dim() + j)]; }
};

/// Values of g, J and their partial derivatives at one point.
/// dg(a,i,j) = ∂_a g_ij, ddg(a,b,i,j) = ∂_a ∂_b g_ij, dddg(a,b,c,i,j), and
/// dJ(a,i,j) = ∂_a J^i_j. `order` is the highest metric derivative filled in.
struct PointJet {
  std::vector<double> point;
  int order = 0;
  Tensor g;
  Tensor dg;
  Tensor ddg;
  Tensor dddg;
  Tensor J;
  Tensor dJ;

  int dim() const { return g.dim(); }
};

/// A validated chart together with the symbolic derivatives of its metric (up
/// to third order) and of J (first order). Immutable after construction.
class Chart {
public:
  static constexpr int kMaxOrder = 3;

  /// Validates shape, coordinate references and symmetry of g. Pointwise
  /// checks (positive definiteness, J² = -I, compatibility) are done by
  /// check_point().
  explicit Chart(ChartSpec spec);

  const ChartSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim(); }
  int n() const { return spec_.n(); }
  const std::string& name() const { return spec_.name; }

  /// Evaluate g, J and derivatives up to `order` (1..3). Throws
  /// ChartDomainError when the point is outside the domain.
  PointJet jet(std::span<const double> point, int order = 2) const;

  /// Symbolic partial derivative of g_ij along the multi-index `coords`
  /// (order 0..3, order-independent).
  const Expr& metric_derivative(int i, int j, std::span<const int> coords) const;
  const Expr& structure_derivative(int i, int j, int coord) const;

  /// Pointwise almost Hermitian checks. Throws ChartDomainError describing
  /// the first failure.
  void check_point(std::span<const double> point, double tol = 1e-10) const;

private:
  std::size_t slot(int i, int j, std::span<const int> coords) const;

  ChartSpec spec_;
  // Derivatives of g_ij for i <= j, keyed by sorted multi-index.
  std::vector<Expr> metric_derivs_;
  std::vector<std::size_t> order_offset_;
  std::vector<Expr> J_derivs_;
};

}  // namespace tvb
