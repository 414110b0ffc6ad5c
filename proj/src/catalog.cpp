#include "tvb/catalog.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvb {

namespace {

using Kind = ExpectedProperty::Kind;

constexpr double kScalarTol = 1e-6;

ExpectedProperty holds(std::string key, std::string provenance) {
  return {std::move(key), Kind::Holds, 0.0, 0.0, std::move(provenance)};
}

ExpectedProperty fails(std::string key, std::string provenance) {
  return {std::move(key), Kind::Fails, 0.0, 0.0, std::move(provenance)};
}

ExpectedProperty equals(std::string key, double value, std::string provenance, double tol = kScalarTol) {
  return {std::move(key), Kind::Equals, value, tol, std::move(provenance)};
}

std::string number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

Expr var(int i) { return Expr::variable(i); }
Expr num(double v) { return Expr::constant(v); }

std::vector<Expr> zeros(int d) { return std::vector<Expr>(static_cast<std::size_t>(d) * d, Expr()); }

std::shared_ptr<const Chart> make_chart(std::string name, const std::string& domain, std::vector<Expr> g,
                                        std::vector<Expr> J) {
  ChartSpec spec;
  spec.name = std::move(name);
  spec.coords = default_coords(4);
  spec.domain = Domain::parse(domain, spec.coords);
  spec.g = std::move(g);
  spec.J = std::move(J);
  return std::make_shared<const Chart>(std::move(spec));
}

GridSpec grid(std::initializer_list<GridAxis> axes) { return GridSpec{std::vector<GridAxis>(axes)}; }

}  // namespace

std::vector<std::string> default_coords(int dim) {
  std::vector<std::string> c;
  for (int i = 1; i <= dim; ++i) c.push_back("x" + std::to_string(i));
  return c;
}

std::vector<Expr> standard_structure(int dim) {
  std::vector<Expr> J = zeros(dim);
  for (int k = 0; 2 * k + 1 < dim; ++k) {
    J[static_cast<std::size_t>((2 * k + 1) * dim + 2 * k)] = num(1.0);
    J[static_cast<std::size_t>(2 * k * dim + 2 * k + 1)] = num(-1.0);
  }
  return J;
}

std::string ExpectedProperty::describe() const {
  switch (kind) {
    case Kind::Holds:
      return key + " holds";
    case Kind::Fails:
      return key + " fails (residual > " + number(kNonzeroThreshold) + ")";
    case Kind::Equals:
      return key + " = " + number(value) + " +/- " + number(tolerance);
  }
  return key;
}

// ---------------------------------------------------------------------------

CatalogEntry example1() {
  CatalogEntry e;
  e.name = "example1";
  e.title = "Hyperbolic 4-space as a Hermitian surface";
  e.citation = "Section 3, Example 1: e_i = x4 d/dx_i on x4 > 0, constant sectional curvature -1";
  std::vector<Expr> g = zeros(4);
  const Expr conformal = num(1.0) / Expr::power(var(3), 2);
  for (int i = 0; i < 4; ++i) g[static_cast<std::size_t>(i * 5)] = conformal;
  e.chart = make_chart(e.name, "x4 > 0", g, standard_structure(4));
  e.frame = zeros(4);
  for (int i = 0; i < 4; ++i) e.frame[static_cast<std::size_t>(i * 5)] = var(3);
  e.frame_J = standard_structure(4);
  e.expected = {
      holds("hermitian", "PAPER"),
      fails("kahler", "DERIVED"),
      holds("einstein", "DERIVED"),
      holds("bochner_flat", "PAPER"),
      holds("weyl_flat", "DERIVED"),
      holds("self_dual", "PAPER"),
      holds("gray_identity", "PAPER"),
      holds("const_hol_sect", "PAPER"),
      equals("hol_sect", -1.0, "PAPER"),
      equals("tau", -12.0, "DERIVED"),
      equals("tau_star", -4.0, "DERIVED"),
      equals("u", -1.0, "PAPER"),
      equals("v", -1.0, "PAPER"),
      equals("w", 0.0, "PAPER"),
      equals("h", 0.0, "PAPER"),
  };
  e.grid = grid({{-1, 1, 3}, {-1, 1, 3}, {-1, 1, 3}, {0.5, 2, 3}});
  e.sample_point = {0, 0, 0, 2};
  return e;
}

CatalogEntry example2(double K) {
  if (!(K > 0.0) || !std::isfinite(K)) throw std::invalid_argument("example2: K must be positive, got " + number(K));
  CatalogEntry e;
  e.name = "example2";
  e.title = "Product of surfaces of curvature K and -K (K = " + number(K) + ")";
  e.citation = "Section 3, Example 2: product of oriented surfaces with constant Gaussian curvatures K and -K";
  std::vector<Expr> g = zeros(4);
  const Expr k = num(K);
  const Expr f1 = num(4.0) / Expr::power(num(1.0) + k * (var(0) * var(0) + var(1) * var(1)), 2);
  const Expr f2 = num(4.0) / Expr::power(num(1.0) - k * (var(2) * var(2) + var(3) * var(3)), 2);
  g[0] = g[5] = f1;
  g[10] = g[15] = f2;
  e.chart = make_chart(e.name, "1 - " + number(K) + "*(x3^2 + x4^2) > 0", g, standard_structure(4));
  e.expected = {
      holds("kahler", "PAPER"),
      holds("bochner_flat", "PAPER"),
      holds("star_equals_ricci", "TRIVIAL"),
      holds("weyl_flat", "DERIVED"),
      equals("tau", 0.0, "TRIVIAL"),
      equals("ricci_eig1", K, "DERIVED"),
      equals("ricci_eig2", K, "DERIVED"),
      equals("ricci_eig3", -K, "DERIVED"),
      equals("ricci_eig4", -K, "DERIVED"),
  };
  // ‖ρ - τ/4 g‖ = 2K, so "not Einstein" is only decidable above the nonzero threshold.
  if (2 * K > kNonzeroThreshold) e.expected.push_back(fails("einstein", "DERIVED"));
  const double r = 0.5 / std::sqrt(K);
  e.grid = grid({{-1, 1, 3}, {-1, 1, 3}, {-r, r, 3}, {-r, r, 3}});
  e.sample_point = {0, 0, 0, 0};
  return e;
}

CatalogEntry example3() {
  CatalogEntry e;
  e.name = "example3";
  e.title = "H^3(-1) x R with a non-integrable almost Kaehler structure";
  e.citation = "Section 3, Example 3: (M,g) = H^3(-1) x R, frame e1 = x1 d/dx1, e2 = x1 d/dx2, e3 = x1 d/dx3, "
               "e4 = d/dx4, constant tau = -6 and tau* = -2";
  const Expr c = Expr::function(Func::Cos, var(3));
  const Expr s = Expr::function(Func::Sin, var(3));
  // The paper's matrix (J_ij): J e_i = Σ_j P_ij e_j.
  const std::array<std::array<Expr, 4>, 4> P{{
      {Expr(), c, s, Expr()},
      {-c, Expr(), Expr(), -s},
      {-s, Expr(), Expr(), c},
      {Expr(), s, -c, Expr()},
  }};
  const std::array<Expr, 4> E{var(0), var(0), var(0), num(1.0)};
  std::vector<Expr> g = zeros(4);
  std::vector<Expr> J = zeros(4);
  e.frame = zeros(4);
  e.frame_J = zeros(4);
  for (int i = 0; i < 4; ++i) {
    g[static_cast<std::size_t>(i * 5)] = (num(1.0) / (E[i] * E[i])).simplify();
    e.frame[static_cast<std::size_t>(i * 5)] = E[i];
    for (int j = 0; j < 4; ++j) {
      e.frame_J[static_cast<std::size_t>(i * 4 + j)] = P[j][i];
      // J_coord = E Pᵀ E⁻¹
      J[static_cast<std::size_t>(i * 4 + j)] = (P[j][i] * E[i] / E[j]).simplify();
    }
  }
  e.chart = make_chart(e.name, "x1 > 0", g, J);
  e.expected = {
      holds("almost_kahler", "PAPER"),
      fails("kahler", "PAPER"),
      fails("hermitian", "PAPER"),
      holds("bochner_flat", "PAPER"),
      holds("weyl_flat", "PAPER"),
      holds("parallel_curvature", "PAPER"),
      equals("tau", -6.0, "PAPER"),
      equals("tau_star", -2.0, "PAPER"),
      equals("ricci_eig1", 0.0, "DERIVED"),
      equals("ricci_eig2", -2.0, "DERIVED"),
      equals("ricci_eig3", -2.0, "DERIVED"),
      equals("ricci_eig4", -2.0, "DERIVED"),
  };
  e.grid = grid({{0.5, 2, 3}, {-1, 1, 3}, {-1, 1, 3}, {0, std::numbers::pi, 3}});
  e.sample_point = {1, 0, 0, 0};
  return e;
}

std::string default_example4_u() { return "exp(x1)*cos(x2)"; }

CatalogEntry example4(const std::string& u) {
  const std::vector<std::string> coords = default_coords(4);
  const Expr uexpr = parse(u, coords);
  CatalogEntry e;
  e.name = "example4";
  e.title = "Conformally flat Hermitian surface g/(1+u)^2, u = " + u;
  e.citation = "Section 7, Example 4: conformal change of flat C^2 by 1/(1+u)^2 with u = Re f, f holomorphic; "
               "Bochner-flat, weakly *-Einstein, pointwise constant holomorphic sectional curvature";
  std::vector<Expr> g = zeros(4);
  const Expr conformal = (num(1.0) / Expr::power(num(1.0) + uexpr, 2)).simplify();
  for (int i = 0; i < 4; ++i) g[static_cast<std::size_t>(i * 5)] = conformal;
  e.chart = make_chart(e.name, "1 + (" + u + ") > 0", g, standard_structure(4));
  e.expected = {
      holds("hermitian", "PAPER"),
      holds("bochner_flat", "PAPER"),
      holds("weakly_star_einstein", "PAPER"),
      holds("const_hol_sect", "PAPER"),
      holds("gray_identity", "PAPER"),
      equals("tau_star_minus_4H", 0.0, "PAPER"),
  };
  if (u == default_example4_u()) e.expected.push_back(fails("einstein", "PAPER"));
  e.grid = grid({{-1, 0.5, 3}, {-1, 1, 3}, {-1, 1, 3}, {-1, 1, 3}});
  e.sample_point = {0.3, 0.2, 0, 0};
  return e;
}

double expected_hol_curvature(const std::string& u, std::span<const double> point) {
  const Expr e = parse(u, default_coords(4));
  double sq = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double d = e.differentiate(a).eval(point);
    sq += d * d;
  }
  return -sq;
}

CatalogEntry flat() {
  CatalogEntry e;
  e.name = "flat";
  e.title = "Flat R^4 with the standard complex structure";
  e.citation = "Remark after Theorem 3.1: locally flat almost Hermitian surface";
  std::vector<Expr> g = zeros(4);
  for (int i = 0; i < 4; ++i) g[static_cast<std::size_t>(i * 5)] = num(1.0);
  e.chart = make_chart(e.name, "", g, standard_structure(4));
  for (const char* p : {"kahler", "almost_kahler", "hermitian", "parallel_curvature", "einstein",
                        "weakly_star_einstein", "bochner_flat", "weyl_flat", "self_dual", "anti_self_dual"}) {
    e.expected.push_back(holds(p, "TRIVIAL"));
  }
  e.expected.push_back(equals("tau", 0.0, "TRIVIAL", 0.0));
  e.expected.push_back(equals("tau_star", 0.0, "TRIVIAL", 0.0));
  e.grid = grid({{-1, 1, 3}, {-1, 1, 3}, {-1, 1, 3}, {-1, 1, 3}});
  e.sample_point = {0, 0, 0, 0};
  return e;
}

CurvatureData csf_algebraic(int n, double c) {
  if (n != 2 && n != 3) throw std::invalid_argument("csf: n must be 2 or 3, got " + std::to_string(n));
  const int d = 2 * n;
  Tensor g = Tensor::covariant(d, 2);
  for (int i = 0; i < d; ++i) g(i, i) = 1.0;
  Tensor J = Tensor::mixed(d);
  for (int k = 0; k < n; ++k) {
    J(2 * k + 1, 2 * k) = 1.0;
    J(2 * k, 2 * k + 1) = -1.0;
  }
  Tensor R = complex_space_form_tensor(g, J, c);
  CurvatureData cd = curvature_from_tensor(std::move(g), std::move(J), std::move(R));
  cd.point.assign(static_cast<std::size_t>(d), 0.0);
  return cd;
}

CatalogEntry csf(int n, double c) {
  if (n != 2 && n != 3) throw std::invalid_argument("csf: n must be 2 or 3, got " + std::to_string(n));
  CatalogEntry e;
  e.name = "csf" + std::to_string(n);
  e.title = "Complex space form, complex dimension " + std::to_string(n) + ", H = " + number(c) + " (point only)";
  e.citation = "Section 3: a complex space form is a typical Bochner-flat example";
  e.dim = 2 * n;
  e.algebraic = [n, c] { return csf_algebraic(n, c); };
  e.expected = {
      holds("bochner_flat", "DERIVED"),
      holds("einstein", "DERIVED"),
      holds("weakly_star_einstein", "DERIVED"),
      holds("star_equals_ricci", "DERIVED"),
      holds("const_hol_sect", "DERIVED"),
      holds("gray_identity", "DERIVED"),
      equals("hol_sect", c, "DERIVED"),
      equals("tau", n * (n + 1) * c, "DERIVED"),
      equals("tau_star", n * (n + 1) * c, "DERIVED"),
  };
  if (n == 2) e.expected.push_back(holds("self_dual", "PAPER"));
  e.sample_point.assign(static_cast<std::size_t>(2 * n), 0.0);
  return e;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"example1", "example2", "example3", "example4", "flat", "csf2", "csf3"};
  return names;
}

CatalogEntry lookup(const std::string& name, const CatalogParams& params) {
  if (name == "example1") return example1();
  if (name == "example2") return example2(params.K);
  if (name == "example3") return example3();
  if (name == "example4") return example4(params.u);
  if (name == "flat") return flat();
  if (name == "csf2") return csf(2, params.c);
  if (name == "csf3") return csf(3, params.c);
  throw std::out_of_range("unknown catalog entry '" + name + "'");
}

std::vector<PropertyCheck> check_expected(const CatalogEntry& entry, const ClassificationReport& report) {
  std::vector<PropertyCheck> out;
  for (const ExpectedProperty& p : entry.expected) {
    PropertyCheck c;
    c.property = p;
    switch (p.kind) {
      case Kind::Holds:
      case Kind::Fails: {
        const Predicate* pred = report.predicate(p.key);
        if (!pred) throw std::invalid_argument("report has no predicate '" + p.key + "'");
        c.observed = pred->residual;
        c.passed = p.kind == Kind::Holds ? pred->holds : pred->clearly_fails();
        break;
      }
      case Kind::Equals:
        c.observed = report.scalar(p.key);
        c.passed = std::abs(c.observed - p.value) <= p.tolerance;
        break;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace tvb
