#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvb/catalog.hpp"
#include "tvb/classify.hpp"

namespace tvb::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// "weakly_star_einstein" -> "weaklyStarEinstein".
std::string camel(std::string_view snake);

Json report_to_json(const ClassificationReport& r);
/// Inverse of report_to_json. Throws std::invalid_argument on schema mismatch.
ClassificationReport report_from_json(const Json& j);

Json summary_to_json(const GridSummary& s);
Json audit_to_json(const AuditReport& a);
Json checks_to_json(const std::vector<PropertyCheck>& checks);
Json entry_to_json(const CatalogEntry& e);
Json tensors_to_json(const CurvatureData& cd);

/// CSV for sweeps. Columns, in order: index, the point coordinates (named by
/// `coords`), tau, tauStar, s, G, holSect, u, v, w, h, then one residual
/// column per predicate in ClassificationReport::predicate_names() order
/// (camelCase, empty when the predicate is not available).
std::string csv_header(const std::vector<std::string>& coords);
std::string csv_row(std::size_t index, const ClassificationReport& r);

/// Human-readable forms, 9 significant digits.
std::string fmt(double v);
void write_report_text(std::ostream& os, const ClassificationReport& r);
void write_summary_text(std::ostream& os, const GridSummary& s);
void write_audit_text(std::ostream& os, const AuditReport& a);
void write_checks_text(std::ostream& os, const std::vector<PropertyCheck>& checks);
void write_entry_text(std::ostream& os, const CatalogEntry& e);

}  // namespace tvb::cli
