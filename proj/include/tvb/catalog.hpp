#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvb/chart.hpp"
#include "tvb/classify.hpp"
#include "tvb/geometry.hpp"

namespace tvb {

/// One claim about a catalog entry, checkable against a ClassificationReport.
struct ExpectedProperty {
  enum class Kind {
    Holds,   // predicate residual below the tolerance
    Fails,   // predicate residual above kNonzeroThreshold
    Equals,  // |scalar - value| <= tolerance
  };

  std::string key;  // predicate or scalar name
  Kind kind = Kind::Holds;
  double value = 0.0;
  double tolerance = 0.0;
  std::string provenance;  // PAPER, DERIVED or TRIVIAL

  std::string describe() const;
};

struct PropertyCheck {
  ExpectedProperty property;
  bool passed = false;
  double observed = 0.0;  // residual or scalar value
};

struct CatalogEntry {
  std::string name;
  std::string title;
  std::string citation;
  int dim = 4;
  std::shared_ptr<const Chart> chart;               // null for point-only entries
  std::function<CurvatureData()> algebraic;         // set for point-only entries
  std::vector<ExpectedProperty> expected;
  std::optional<GridSpec> grid;                     // suggested sample grid
  std::vector<double> sample_point;
  // Moving frame of the paper as coordinate expressions: frame[i*d+a] = e_a^i,
  // and J in that frame (J e_b = Σ_a frame_J[a*d+b] e_a). Empty when the
  // example is given directly in coordinates.
  std::vector<Expr> frame;
  std::vector<Expr> frame_J;

  bool point_only() const { return chart == nullptr; }
};

/// Hyperbolic 4-space as a Hermitian surface on the upper half space x4 > 0.
CatalogEntry example1();
/// Product of constant-curvature K and -K surfaces; throws std::invalid_argument for K <= 0.
CatalogEntry example2(double K = 1.0);
/// H³(-1) × R with the almost Kähler structure rotating in x4.
CatalogEntry example3();
/// u = exp(x1)*cos(x2), the real part of exp(z1).
std::string default_example4_u();

/// Conformal change ḡ = g/(1+u)² of flat C² with its standard J. `u` is an
/// expression in x1..x4 and should be the real part of a holomorphic function.
CatalogEntry example4(const std::string& u = default_example4_u());
/// Flat R⁴ with the standard structure.
CatalogEntry flat();
/// Point-only complex space form of holomorphic curvature c in complex
/// dimension n ∈ {2, 3}.
CatalogEntry csf(int n, double c = 1.0);

/// The constant-holomorphic-curvature algebraic tensor with standard g, J at
/// the origin of C^n. Throws std::invalid_argument for n ∉ {2, 3}.
CurvatureData csf_algebraic(int n, double c);

/// H = -|du|² (flat gradient) predicted for Example 4 at `point`.
double expected_hol_curvature(const std::string& u, std::span<const double> point);

struct CatalogParams {
  double K = 1.0;
  std::string u = default_example4_u();
  double c = 1.0;
};

/// Names exposed to the CLI, in listing order.
const std::vector<std::string>& catalog_names();

/// Throws std::out_of_range for an unknown name.
CatalogEntry lookup(const std::string& name, const CatalogParams& params = {});

std::vector<PropertyCheck> check_expected(const CatalogEntry& entry, const ClassificationReport& report);

/// Standard structure J e_{2k+1} = e_{2k+2} as coordinate expressions.
std::vector<Expr> standard_structure(int dim);

std::vector<std::string> default_coords(int dim);

}  // namespace tvb
