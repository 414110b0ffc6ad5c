#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tvb/bochner.hpp"
#include "tvb/chart.hpp"
#include "tvb/geometry.hpp"

namespace tvb {

/// "≠ 0" claims need a residual above this, independent of the tolerance.
inline constexpr double kNonzeroThreshold = 0.1;

/// Default relative tolerance for "= 0" claims.
inline constexpr double kDefaultTolerance = 1e-8;

struct ClassifyOptions {
  double tol = kDefaultTolerance;
  int hol_directions = 100;
  std::uint64_t seed = 20240917;
  int threads = 0;        // grid only; 0 = hardware concurrency
  double margin = 0.1;    // grid only; minimum slack of every domain constraint
};

struct Predicate {
  double residual = 0.0;
  bool holds = false;

  /// The residual is far enough from zero to call the property absent.
  bool clearly_fails() const { return residual > kNonzeroThreshold; }
};

/// Tensor-level predicates evaluate "= 0" against tol · max(1, ‖R‖); the
/// structural ones (∇J, dΩ, N) against tol.
struct ClassificationReport {
  std::vector<double> point;
  int dim = 0;
  double tol = kDefaultTolerance;
  double curvature_norm = 0.0;  // ‖R‖

  // Need a chart (derivatives of J or of R).
  std::optional<Predicate> kahler;               // ‖∇J‖
  std::optional<Predicate> almost_kahler;        // ‖dΩ‖
  std::optional<Predicate> hermitian;            // ‖N‖
  std::optional<Predicate> parallel_curvature;   // ‖∇R‖

  Predicate einstein;              // ‖ρ - τ/(2n) g‖
  Predicate weakly_star_einstein;  // ‖ρ* - τ*/(2n) g‖
  Predicate star_equals_ricci;     // ‖ρ* - ρ‖
  Predicate bochner_flat;          // ‖B(R)‖
  Predicate weyl_flat;             // ‖W‖
  Predicate gray_identity;         // Eq. (14), max over frame 4-tuples
  Predicate const_hol_sect;        // spread of H over sampled directions

  // Real dimension 4 only.
  std::optional<Predicate> self_dual;       // ‖𝒲₋‖
  std::optional<Predicate> anti_self_dual;  // ‖𝒲₊‖

  double tau = 0.0;
  double tau_star = 0.0;
  double s = 0.0;  // 3τ* - τ
  double G = 0.0;  // Σ (ρ*_ij - ρ*_ji)² in the adapted frame
  double hol_sect_mean = 0.0;
  double hol_sect_min = 0.0;
  double hol_sect_max = 0.0;
  std::vector<double> ricci_eigenvalues;  // descending, λ first

  std::optional<Uvwh> uvwh;
  std::optional<WeylNorms> weyl_norms;
  std::optional<CharacteristicDensities> densities;
  std::optional<double> weyl_block_consistency;  // |‖W‖² - 4(‖𝒲₊‖² + ‖𝒲₋‖²)|

  /// Named predicate lookup ("kahler", "bochner_flat", ...). Returns nullptr
  /// for names that are absent from this report; throws for unknown names.
  const Predicate* predicate(std::string_view name) const;

  /// Named scalar lookup ("tau", "tau_star", "s", "G", "u", "v", "w", "h",
  /// "hol_sect", "tau_star_minus_4H", "ricci_eig1".."ricci_eigN"). Throws for
  /// unknown or unavailable names.
  double scalar(std::string_view name) const;

  static const std::vector<std::string>& predicate_names();
};

ClassificationReport classify_point(const Chart& chart, std::span<const double> point,
                                    const ClassifyOptions& opt = {});

/// Same report for purely algebraic data (no chart). Chart-only predicates
/// stay empty.
ClassificationReport classify_algebraic(const CurvatureData& cd, const ClassifyOptions& opt = {});

// ---------------------------------------------------------------------------
// Grids

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double value(int k) const;
};

/// Tensor-product grid in lexicographic order (first coordinate slowest).
struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  std::vector<double> point(std::size_t index) const;

  /// "lo:hi:count,lo:hi:count,..." or a single value per axis ("2" means 2:2:1).
  static GridSpec parse(std::string_view text);
  std::string to_string() const;
};

/// A grid point lies closer to the domain boundary than the margin allows.
class GridDomainError : public ChartDomainError {
public:
  using ChartDomainError::ChartDomainError;
};

struct PredicateSummary {
  std::string name;
  std::size_t holds = 0;
  std::size_t evaluated = 0;
  double max_residual = 0.0;
  double min_residual = 0.0;

  bool holds_everywhere() const { return evaluated > 0 && holds == evaluated; }
};

struct ScalarSummary {
  std::string name;
  double min = 0.0;
  double max = 0.0;

  double spread() const { return max - min; }
};

struct GridSummary {
  std::size_t points = 0;
  std::vector<PredicateSummary> predicates;
  std::vector<ScalarSummary> scalars;

  const PredicateSummary& predicate(std::string_view name) const;
  const ScalarSummary& scalar(std::string_view name) const;
};

struct GridResult {
  GridSpec grid;
  std::vector<ClassificationReport> reports;  // grid order
  GridSummary summary;
};

/// Evaluates every grid point (worker pool, deterministic output order).
/// Throws std::invalid_argument for an empty grid or a dimension mismatch and
/// GridDomainError when a point violates the domain margin.
GridResult classify_grid(const Chart& chart, const GridSpec& grid, const ClassifyOptions& opt = {});

GridSummary summarize(std::span<const ClassificationReport> reports);

// ---------------------------------------------------------------------------
// Theorem audit

/// The audited chart is not Bochner-flat on the grid.
class NotBochnerFlat : public ContractViolation {
public:
  using ContractViolation::ContractViolation;
};

struct AuditItem {
  std::string name;
  std::string statement;
  std::size_t applicable = 0;  // points where the hypothesis holds
  std::size_t counterexamples = 0;
  double worst_residual = 0.0;     // largest conclusion residual where applicable
  std::vector<double> worst_point;

  bool passed() const { return counterexamples == 0; }
};

struct AuditReport {
  std::size_t points = 0;
  double max_bochner_residual = 0.0;
  std::vector<AuditItem> items;

  bool passed() const;
};

/// Checks, at every grid point, the local implications valid on Bochner-flat
/// surfaces: self-duality, the anti-self-duality and conformal flatness
/// criteria, the curvature identity, ρ* = ρ on Kähler points and the Einstein
/// values of u, v, w, h. Throws NotBochnerFlat when some point fails
/// bochner_flat, std::invalid_argument when the chart is not 4-dimensional.
AuditReport theorem_audit(const Chart& chart, const GridSpec& grid, const ClassifyOptions& opt = {});
AuditReport theorem_audit(std::span<const ClassificationReport> reports);

}  // namespace tvb
