#include "tvb/cli/report_io.hpp"

#include <cctype>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace tvb::cli {

std::string camel(std::string_view snake) {
  std::string out;
  bool upper = false;
  for (char c : snake) {
    if (c == '_') {
      upper = true;
      continue;
    }
    out.push_back(upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    upper = false;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

Json point_json(const std::vector<double>& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(v);
  return a;
}

Json predicate_json(const Predicate& p) { return Json{{"holds", p.holds}, {"residual", p.residual}}; }

Predicate predicate_from(const Json& j) { return {j.at("residual").get<double>(), j.at("holds").get<bool>()}; }

std::optional<Predicate>* optional_slot(ClassificationReport& r, std::string_view name) {
  if (name == "kahler") return &r.kahler;
  if (name == "almost_kahler") return &r.almost_kahler;
  if (name == "hermitian") return &r.hermitian;
  if (name == "parallel_curvature") return &r.parallel_curvature;
  if (name == "self_dual") return &r.self_dual;
  if (name == "anti_self_dual") return &r.anti_self_dual;
  return nullptr;
}

Predicate* required_slot(ClassificationReport& r, std::string_view name) {
  if (name == "einstein") return &r.einstein;
  if (name == "weakly_star_einstein") return &r.weakly_star_einstein;
  if (name == "star_equals_ricci") return &r.star_equals_ricci;
  if (name == "bochner_flat") return &r.bochner_flat;
  if (name == "weyl_flat") return &r.weyl_flat;
  if (name == "gray_identity") return &r.gray_identity;
  if (name == "const_hol_sect") return &r.const_hol_sect;
  return nullptr;
}

Json tensor_json(const Tensor& t) {
  Json shape = Json::array();
  for (int i = 0; i < t.rank(); ++i) shape.push_back(t.dim());
  Json variance = Json::array();
  for (Variance v : t.variance()) variance.push_back(v == Variance::Covariant ? "co" : "contra");
  Json data = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) data.push_back(t.data()[i]);
  return Json{{"shape", shape}, {"variance", variance}, {"data", data}};
}

}  // namespace

Json report_to_json(const ClassificationReport& r) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  j["point"] = point_json(r.point);
  j["dim"] = r.dim;
  j["tolerance"] = r.tol;
  j["curvatureNorm"] = r.curvature_norm;
  j["tau"] = r.tau;
  j["tauStar"] = r.tau_star;
  j["s"] = r.s;
  j["G"] = r.G;
  j["holSect"] = Json{{"mean", r.hol_sect_mean}, {"min", r.hol_sect_min}, {"max", r.hol_sect_max}};
  j["ricciEigenvalues"] = point_json(r.ricci_eigenvalues);
  if (r.uvwh) j["uvwh"] = Json{{"u", r.uvwh->u}, {"v", r.uvwh->v}, {"w", r.uvwh->w}, {"h", r.uvwh->h}};
  Json preds = Json::object();
  for (const std::string& name : ClassificationReport::predicate_names()) {
    if (const Predicate* p = r.predicate(name)) preds[camel(name)] = predicate_json(*p);
  }
  j["predicates"] = preds;
  if (r.weyl_norms) j["weylNorms"] = Json{{"plusSq", r.weyl_norms->plus_sq}, {"minusSq", r.weyl_norms->minus_sq}};
  if (r.weyl_block_consistency) j["weylBlockConsistency"] = *r.weyl_block_consistency;
  if (r.densities) {
    const auto& d = *r.densities;
    j["densities"] = Json{{"p1", d.p1},
                          {"chi", d.chi},
                          {"c1sq", d.c1sq},
                          {"p1BochnerFlat", d.p1_bochner_flat},
                          {"chiBochnerFlat", d.chi_bochner_flat},
                          {"c1sqBochnerFlat", d.c1sq_bochner_flat}};
  }
  return j;
}

ClassificationReport report_from_json(const Json& j) {
  try {
    if (j.at("schemaVersion").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported schemaVersion " + j.at("schemaVersion").dump());
    }
    ClassificationReport r;
    r.point = j.at("point").get<std::vector<double>>();
    r.dim = j.at("dim").get<int>();
    r.tol = j.at("tolerance").get<double>();
    r.curvature_norm = j.at("curvatureNorm").get<double>();
    r.tau = j.at("tau").get<double>();
    r.tau_star = j.at("tauStar").get<double>();
    r.s = j.at("s").get<double>();
    r.G = j.at("G").get<double>();
    r.hol_sect_mean = j.at("holSect").at("mean").get<double>();
    r.hol_sect_min = j.at("holSect").at("min").get<double>();
    r.hol_sect_max = j.at("holSect").at("max").get<double>();
    r.ricci_eigenvalues = j.at("ricciEigenvalues").get<std::vector<double>>();
    if (j.contains("uvwh")) {
      const Json& q = j["uvwh"];
      r.uvwh = Uvwh{q.at("u").get<double>(), q.at("v").get<double>(), q.at("w").get<double>(), q.at("h").get<double>()};
    }
    const Json& preds = j.at("predicates");
    for (const std::string& name : ClassificationReport::predicate_names()) {
      const std::string key = camel(name);
      if (Predicate* p = required_slot(r, name)) {
        *p = predicate_from(preds.at(key));
      } else if (preds.contains(key)) {
        *optional_slot(r, name) = predicate_from(preds[key]);
      }
    }
    if (j.contains("weylNorms")) {
      r.weyl_norms = WeylNorms{j["weylNorms"].at("plusSq").get<double>(), j["weylNorms"].at("minusSq").get<double>()};
    }
    if (j.contains("weylBlockConsistency")) r.weyl_block_consistency = j["weylBlockConsistency"].get<double>();
    if (j.contains("densities")) {
      const Json& d = j["densities"];
      CharacteristicDensities cd;
      cd.p1 = d.at("p1").get<double>();
      cd.chi = d.at("chi").get<double>();
      cd.c1sq = d.at("c1sq").get<double>();
      cd.p1_bochner_flat = d.at("p1BochnerFlat").get<double>();
      cd.chi_bochner_flat = d.at("chiBochnerFlat").get<double>();
      cd.c1sq_bochner_flat = d.at("c1sqBochnerFlat").get<double>();
      r.densities = cd;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report JSON does not match the schema: ") + e.what());
  }
}

Json summary_to_json(const GridSummary& s) {
  Json j;
  j["points"] = s.points;
  Json preds = Json::object();
  for (const auto& p : s.predicates) {
    preds[camel(p.name)] = Json{{"holds", p.holds},
                                {"evaluated", p.evaluated},
                                {"holdsEverywhere", p.holds_everywhere()},
                                {"maxResidual", p.max_residual},
                                {"minResidual", p.min_residual}};
  }
  j["predicates"] = preds;
  Json scalars = Json::object();
  for (const auto& sc : s.scalars) {
    scalars[camel(sc.name)] = Json{{"min", sc.min}, {"max", sc.max}, {"spread", sc.spread()}};
  }
  j["scalars"] = scalars;
  return j;
}

Json audit_to_json(const AuditReport& a) {
  Json j;
  j["points"] = a.points;
  j["maxBochnerResidual"] = a.max_bochner_residual;
  j["passed"] = a.passed();
  Json items = Json::array();
  for (const auto& it : a.items) {
    items.push_back(Json{{"name", it.name},
                         {"statement", it.statement},
                         {"passed", it.passed()},
                         {"applicable", it.applicable},
                         {"counterexamples", it.counterexamples},
                         {"worstResidual", it.worst_residual},
                         {"worstPoint", point_json(it.worst_point)}});
  }
  j["items"] = items;
  return j;
}

Json checks_to_json(const std::vector<PropertyCheck>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) {
    a.push_back(Json{{"property", c.property.describe()},
                     {"provenance", c.property.provenance},
                     {"passed", c.passed},
                     {"observed", c.observed}});
  }
  return a;
}

Json entry_to_json(const CatalogEntry& e) {
  Json j;
  j["name"] = e.name;
  j["title"] = e.title;
  j["citation"] = e.citation;
  j["dim"] = e.dim;
  j["pointOnly"] = e.point_only();
  if (e.chart) {
    j["domain"] = e.chart->spec().domain.text();
    Json g = Json::array();
    Json J = Json::array();
    const int d = e.chart->dim();
    for (int i = 0; i < d; ++i) {
      Json grow = Json::array();
      Json jrow = Json::array();
      for (int k = 0; k < d; ++k) {
        grow.push_back(e.chart->spec().g_at(i, k).to_string(e.chart->spec().coords));
        jrow.push_back(e.chart->spec().J_at(i, k).to_string(e.chart->spec().coords));
      }
      g.push_back(grow);
      J.push_back(jrow);
    }
    j["g"] = g;
    j["J"] = J;
  }
  if (e.grid) j["grid"] = e.grid->to_string();
  j["samplePoint"] = point_json(e.sample_point);
  Json exp = Json::array();
  for (const auto& p : e.expected) exp.push_back(Json{{"property", p.describe()}, {"provenance", p.provenance}});
  j["expected"] = exp;
  return j;
}

Json tensors_to_json(const CurvatureData& cd) {
  Json j;
  j["g"] = tensor_json(cd.g);
  j["J"] = tensor_json(cd.J);
  j["riemann"] = tensor_json(cd.riemann);
  j["ricci"] = tensor_json(cd.ricci);
  j["ricciStar"] = tensor_json(cd.ricci_star);
  return j;
}

// ---------------------------------------------------------------------------

std::string csv_header(const std::vector<std::string>& coords) {
  std::string h = "index";
  for (const auto& c : coords) h += "," + c;
  h += ",tau,tauStar,s,G,holSect,u,v,w,h";
  for (const std::string& name : ClassificationReport::predicate_names()) h += "," + camel(name);
  return h;
}

std::string csv_row(std::size_t index, const ClassificationReport& r) {
  // Full round-trip precision in machine output.
  const auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return std::string(buf);
  };
  std::string row = std::to_string(index);
  for (double x : r.point) row += "," + num(x);
  for (double v : {r.tau, r.tau_star, r.s, r.G, r.hol_sect_mean}) row += "," + num(v);
  if (r.uvwh) {
    for (double v : {r.uvwh->u, r.uvwh->v, r.uvwh->w, r.uvwh->h}) row += "," + num(v);
  } else {
    row += ",,,,";
  }
  for (const std::string& name : ClassificationReport::predicate_names()) {
    const Predicate* p = r.predicate(name);
    row += ",";
    if (p) row += num(p->residual);
  }
  return row;
}

void write_report_text(std::ostream& os, const ClassificationReport& r) {
  os << "point:";
  for (double x : r.point) os << ' ' << fmt(x);
  os << "\n";
  os << "tau = " << fmt(r.tau) << "   tau* = " << fmt(r.tau_star) << "   3tau*-tau = " << fmt(r.s)
     << "   G = " << fmt(r.G) << "\n";
  os << "|R| = " << fmt(r.curvature_norm) << "   H in [" << fmt(r.hol_sect_min) << ", " << fmt(r.hol_sect_max)
     << "]\n";
  os << "Ricci eigenvalues:";
  for (double v : r.ricci_eigenvalues) os << ' ' << fmt(v);
  os << "\n";
  if (r.uvwh) {
    os << "u = " << fmt(r.uvwh->u) << "   v = " << fmt(r.uvwh->v) << "   w = " << fmt(r.uvwh->w)
       << "   h = " << fmt(r.uvwh->h) << "\n";
  }
  if (r.densities) {
    const auto& d = *r.densities;
    os << "densities: p1 = " << fmt(d.p1) << "   chi = " << fmt(d.chi) << "   c1^2 = " << fmt(d.c1sq) << "\n";
    os << "  Bochner-flat forms: p1 = " << fmt(d.p1_bochner_flat) << "   chi = " << fmt(d.chi_bochner_flat)
       << "   c1^2 = " << fmt(d.c1sq_bochner_flat) << "\n";
  }
  os << "predicates (tolerance " << fmt(r.tol) << "):\n";
  for (const std::string& name : ClassificationReport::predicate_names()) {
    const Predicate* p = r.predicate(name);
    if (!p) continue;
    char line[128];
    std::snprintf(line, sizeof line, "  %-22s %-5s residual %s\n", name.c_str(), p->holds ? "yes" : "no",
                  fmt(p->residual).c_str());
    os << line;
  }
}

void write_summary_text(std::ostream& os, const GridSummary& s) {
  os << "points: " << s.points << "\n";
  for (const auto& p : s.predicates) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-22s %zu/%zu   max residual %s\n", p.name.c_str(), p.holds, p.evaluated,
                  fmt(p.max_residual).c_str());
    os << line;
  }
  for (const auto& sc : s.scalars) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-10s min %-16s max %-16s spread %s\n", sc.name.c_str(), fmt(sc.min).c_str(),
                  fmt(sc.max).c_str(), fmt(sc.spread()).c_str());
    os << line;
  }
}

void write_audit_text(std::ostream& os, const AuditReport& a) {
  os << "audited points: " << a.points << "   max |B(R)| = " << fmt(a.max_bochner_residual) << "\n";
  for (const auto& it : a.items) {
    os << (it.passed() ? "PASS " : "FAIL ") << it.name << " (" << it.statement << "): applicable at "
       << it.applicable << ", counterexamples " << it.counterexamples;
    if (!it.worst_point.empty()) {
      os << ", worst residual " << fmt(it.worst_residual) << " at (";
      for (std::size_t i = 0; i < it.worst_point.size(); ++i) os << (i ? ", " : "") << fmt(it.worst_point[i]);
      os << ")";
    }
    os << "\n";
  }
}

void write_checks_text(std::ostream& os, const std::vector<PropertyCheck>& checks) {
  for (const auto& c : checks) {
    os << "  [" << (c.passed ? "ok" : "MISMATCH") << "] " << c.property.describe() << "  (observed "
       << fmt(c.observed) << ", " << c.property.provenance << ")\n";
  }
}

void write_entry_text(std::ostream& os, const CatalogEntry& e) {
  os << e.name << ": " << e.title << "\n";
  os << "  citation: " << e.citation << "\n";
  if (e.chart) {
    os << "  domain: " << (e.chart->spec().domain.text().empty() ? "all" : e.chart->spec().domain.text()) << "\n";
  } else {
    os << "  point-only algebraic entry (dimension " << e.dim << ")\n";
  }
  if (e.grid) os << "  suggested grid: " << e.grid->to_string() << "\n";
  os << "  expected:\n";
  for (const auto& p : e.expected) os << "    " << p.describe() << " [" << p.provenance << "]\n";
}

}  // namespace tvb::cli
