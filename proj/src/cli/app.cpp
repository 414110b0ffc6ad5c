#include "tvb/cli/app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "tvb/catalog.hpp"
#include "tvb/classify.hpp"
#include "tvb/cli/manifold_file.hpp"
#include "tvb/cli/report_io.hpp"

namespace tvb::cli {

namespace {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Source {
  std::string name;
  std::optional<CatalogEntry> entry;
  std::shared_ptr<const Chart> chart;
  std::optional<std::vector<double>> probe;
};

Source resolve(const std::string& manifold, const CatalogParams& params) {
  Source s;
  s.name = manifold;
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), manifold) != names.end()) {
    s.entry = lookup(manifold, params);
    s.chart = s.entry->chart;
    return s;
  }
  if (!std::filesystem::is_regular_file(manifold)) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown manifold '" + manifold + "' (not a catalog name [" + list + "] nor a readable file)");
  }
  std::ifstream in(manifold);
  std::ostringstream buf;
  buf << in.rdbuf();
  const ManifoldFile mf = parse_manifold(buf.str(), std::filesystem::path(manifold).filename().string());
  s.probe = mf.probe;
  s.chart = std::make_shared<const Chart>(build_chart(mf));
  return s;
}

double default_tolerance() {
  if (const char* env = std::getenv("TVB_TOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size() && v > 0.0 && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("TVB_TOL must be a positive number, got '") + env + "'");
  }
  return kDefaultTolerance;
}

struct Common {
  std::string manifold;
  std::string format = "text";
  std::optional<double> tol;
  double K = 1.0;
  std::string u = default_example4_u();
  double c = 1.0;

  ClassifyOptions options() const {
    ClassifyOptions o;
    o.tol = tol ? *tol : default_tolerance();
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    return o;
  }
  CatalogParams params() const { return {K, u, c}; }
};

void add_common(CLI::App* sub, Common& c, bool manifold_required = true) {
  auto* m = sub->add_option("--manifold,-m", c.manifold, "Catalog name or manifold file");
  if (manifold_required) m->required();
  sub->add_option("--tol", c.tol, "Relative tolerance for '= 0' predicates (default 1e-8 or $TVB_TOL)");
  sub->add_option("--K", c.K, "Curvature parameter of example2")->capture_default_str();
  sub->add_option("--u", c.u, "Conformal function u(x1..x4) of example4")->capture_default_str();
  sub->add_option("--c", c.c, "Holomorphic sectional curvature of csf2/csf3")->capture_default_str();
}

std::string header_name(const Source& s) { return s.entry ? s.entry->name : s.chart->name(); }

Json document(const char* kind, const Source& s) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  j["kind"] = kind;
  j["manifold"] = header_name(s);
  return j;
}

GridSpec grid_for(const Source& s, const std::string& grid_text) {
  if (!grid_text.empty()) {
    try {
      return GridSpec::parse(grid_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (s.entry && s.entry->grid) return *s.entry->grid;
  if (s.entry && s.entry->point_only()) throw UsageError("'" + s.name + "' is a point-only entry and has no grid");
  throw UsageError("--grid is required for manifold files");
}

// ---------------------------------------------------------------------------

int cmd_report(const Common& c, const std::string& point_text, bool tensors, std::ostream& out) {
  const Source s = resolve(c.manifold, c.params());
  const ClassifyOptions opt = c.options();
  ClassificationReport r;
  std::optional<CurvatureData> cd;
  if (s.entry && s.entry->point_only()) {
    cd = s.entry->algebraic();
    r = classify_algebraic(*cd, opt);
  } else {
    std::vector<double> point;
    if (!point_text.empty()) {
      try {
        point = parse_point(point_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (s.entry) {
      point = s.entry->sample_point;
    } else if (s.probe) {
      point = *s.probe;
    } else {
      throw UsageError("--point is required (the manifold file has no probe)");
    }
    if (static_cast<int>(point.size()) != s.chart->dim()) {
      throw UsageError("malformed point: " + std::to_string(point.size()) + " coordinates given, chart '" +
                       s.chart->name() + "' has dimension " + std::to_string(s.chart->dim()));
    }
    r = classify_point(*s.chart, point, opt);
    if (tensors) cd = curvature(*s.chart, point);
  }
  std::optional<std::vector<PropertyCheck>> checks;
  if (s.entry) checks = check_expected(*s.entry, r);

  if (c.format == "json") {
    Json j = document("report", s);
    const Json body = report_to_json(r);
    for (const auto& [k, v] : body.items()) {
      if (k != "schemaVersion") j[k] = v;
    }
    if (checks) j["expected"] = checks_to_json(*checks);
    if (tensors && cd) j["tensors"] = tensors_to_json(*cd);
    out << j.dump(2) << "\n";
  } else {
    out << "manifold: " << header_name(s) << "\n";
    write_report_text(out, r);
    if (checks) {
      out << "expected properties:\n";
      write_checks_text(out, *checks);
    }
    if (tensors && cd) out << tensors_to_json(*cd).dump() << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::string& grid_text, const std::string& out_path, int threads, double margin,
              std::ostream& out) {
  const Source s = resolve(c.manifold, c.params());
  const GridSpec grid = grid_for(s, grid_text);
  ClassifyOptions opt = c.options();
  opt.threads = threads;
  opt.margin = margin;
  const GridResult res = classify_grid(*s.chart, grid, opt);

  const auto rows_json = [&] {
    Json rows = Json::array();
    for (const auto& r : res.reports) rows.push_back(report_to_json(r));
    return rows;
  };
  const auto write_csv = [&](std::ostream& os) {
    os << csv_header(s.chart->spec().coords) << "\n";
    for (std::size_t k = 0; k < res.reports.size(); ++k) os << csv_row(k, res.reports[k]) << "\n";
  };

  Json doc = document("sweep", s);
  doc["grid"] = grid.to_string();
  doc["summary"] = summary_to_json(res.summary);

  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
    if (out_path.size() >= 4 && out_path.compare(out_path.size() - 4, 4, ".csv") == 0) {
      write_csv(file);
    } else {
      Json full = doc;
      full["rows"] = rows_json();
      file << full.dump(2) << "\n";
    }
  }

  if (c.format == "json") {
    if (out_path.empty()) doc["rows"] = rows_json();
    out << doc.dump(2) << "\n";
  } else if (c.format == "csv") {
    write_csv(out);
  } else {
    out << "manifold: " << header_name(s) << "\ngrid: " << grid.to_string() << "\n";
    write_summary_text(out, res.summary);
  }
  return kExitOk;
}

int cmd_audit(const Common& c, const std::string& grid_text, int threads, double margin, std::ostream& out) {
  const Source s = resolve(c.manifold, c.params());
  if (s.entry && s.entry->point_only()) {
    const ClassificationReport r = classify_algebraic(s.entry->algebraic(), c.options());
    const ClassificationReport reports[] = {r};
    const AuditReport a = theorem_audit(reports);
    if (c.format == "json") {
      Json j = document("audit", s);
      j["audit"] = audit_to_json(a);
      out << j.dump(2) << "\n";
    } else {
      write_audit_text(out, a);
    }
    return a.passed() ? kExitOk : kExitAuditFailed;
  }
  const GridSpec grid = grid_for(s, grid_text);
  ClassifyOptions opt = c.options();
  opt.threads = threads;
  opt.margin = margin;
  const AuditReport a = theorem_audit(*s.chart, grid, opt);
  if (c.format == "json") {
    Json j = document("audit", s);
    j["grid"] = grid.to_string();
    j["audit"] = audit_to_json(a);
    out << j.dump(2) << "\n";
  } else {
    out << "manifold: " << header_name(s) << "\ngrid: " << grid.to_string() << "\n";
    write_audit_text(out, a);
  }
  return a.passed() ? kExitOk : kExitAuditFailed;
}

int cmd_list(const std::string& format, const CatalogParams& params, std::ostream& out) {
  if (format == "json") {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["kind"] = "catalog";
    Json entries = Json::array();
    for (const auto& name : catalog_names()) entries.push_back(entry_to_json(lookup(name, params)));
    j["entries"] = entries;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& name : catalog_names()) write_entry_text(out, lookup(name, params));
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature toolkit for almost Hermitian charts: Bochner and Weyl tensors, classification, audits"};
  app.require_subcommand(1);

  Common common;
  std::string point;
  std::string grid;
  std::string out_path;
  bool tensors = false;
  int threads = 0;
  double margin = 0.1;

  auto* report = app.add_subcommand("report", "Classify one point");
  add_common(report, common);
  report->add_option("--point,-p", point, "Comma separated coordinates");
  report->add_flag("--tensors", tensors, "Include raw g, J, R, rho, rho* in the output");
  report->add_option("--format,-f", common.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Classify every point of a grid");
  add_common(sweep, common);
  sweep->add_option("--grid,-g", grid, "lo:hi:count per coordinate, comma separated");
  sweep->add_option("--out,-o", out_path, "Write per-point rows here (.csv for CSV, JSON otherwise)");
  sweep->add_option("--format,-f", common.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--margin", margin, "Minimum distance of grid points from the domain boundary")
      ->capture_default_str();

  auto* audit = app.add_subcommand("audit", "Audit the Bochner-flat theorems on a grid");
  add_common(audit, common);
  audit->add_option("--grid,-g", grid, "lo:hi:count per coordinate, comma separated");
  audit->add_option("--format,-f", common.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  audit->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  audit->add_option("--margin", margin, "Minimum distance of grid points from the domain boundary")
      ->capture_default_str();

  auto* list = app.add_subcommand("list", "List the built-in catalog");
  add_common(list, common, false);
  list->add_option("--format,-f", common.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*report) return cmd_report(common, point, tensors, out);
    if (*sweep) return cmd_sweep(common, grid, out_path, threads, margin, out);
    if (*audit) return cmd_audit(common, grid, threads, margin, out);
    if (*list) return cmd_list(common.format, common.params(), out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << " (offset " << e.offset() << ")\n";
    return kExitParse;
  } catch (const ChartDomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NotBochnerFlat& e) {
    err << "audit refused: " << e.what() << "\n";
    return kExitAuditRefused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tvb::cli
