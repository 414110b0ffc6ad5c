#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tvb/chart.hpp"

namespace tvb::cli {

/// Plain-text chart definition.
///
///   # comment
///   name   = my-chart               (optional)
///   dim    = 4
///   coords = x1, x2, x3, x4
///   domain = x4 > 0 && x1 < 3       (optional; empty means all of R^dim)
///   probe  = 0, 0, 0, 1             (optional point for the load-time checks)
///   g[i][j] = "<expr>"              (1-based indices)
///   J[i][j] = "<expr>"              (J^i_j, i.e. row i, column j)
///
/// An unspecified g[i][j] mirrors g[j][i] or is 0; an unspecified J[i][j] is 0.
struct ManifoldFile {
  ChartSpec spec;
  std::optional<std::vector<double>> probe;
};

/// Throws ParseError (byte offset into `text`) on malformed input.
ManifoldFile parse_manifold(std::string_view text, const std::string& default_name = "manifold");

/// Builds the chart and, when a probe point is given, runs the pointwise
/// almost Hermitian checks there. Structural problems surface as ParseError.
Chart build_chart(ManifoldFile mf);

/// Reads and parses `path`, builds the chart and, when a probe point is
/// given, runs the pointwise almost Hermitian checks there. Throws
/// std::runtime_error if the file cannot be read, ParseError on syntax
/// errors and ChartDomainError when the probe check fails.
Chart load_manifold(const std::string& path);

/// Comma separated reals. Throws std::invalid_argument when malformed.
std::vector<double> parse_point(std::string_view text);

}  // namespace tvb::cli
