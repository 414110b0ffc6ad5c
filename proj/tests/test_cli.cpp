#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "tvb/catalog.hpp"
#include "tvb/cli/app.hpp"
#include "tvb/cli/manifold_file.hpp"
#include "tvb/cli/report_io.hpp"

using namespace tvb;
using namespace tvb::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tvb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "tvb_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* kHyperbolic = R"(# upper half space model
name = hyp
dim = 4
coords = x1, x2, x3, x4
domain = x4 > 0
probe = 0, 0, 0, 1
g[1][1] = "1/x4^2"
g[2][2] = "1/x4^2"
g[3][3] = "1/x4^2"
g[4][4] = "1/x4^2"
J[2][1] = "1"
J[1][2] = "-1"
J[4][3] = "1"
J[3][4] = "-1"
)";

std::size_t parse_offset(const std::string& text) {
  try {
    parse_manifold(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("no ParseError");
  return 0;
}

}  // namespace

TEST_CASE("manifold file parsing") {
  const ManifoldFile mf = parse_manifold(kHyperbolic);
  CHECK(mf.spec.name == "hyp");
  CHECK(mf.spec.dim() == 4);
  REQUIRE(mf.probe.has_value());
  CHECK(*mf.probe == std::vector<double>{0, 0, 0, 1});
  const std::vector<double> p{0, 0, 0, 2};
  CHECK(mf.spec.g_at(0, 0).eval(p) == doctest::Approx(0.25));
  CHECK(mf.spec.g_at(0, 1).eval(p) == 0.0);
  CHECK(mf.spec.J_at(1, 0).eval(p) == 1.0);
  const Chart chart = build_chart(mf);
  CHECK(chart.spec().domain.contains(p));

  // mirrored off-diagonal entries and bare values
  const ManifoldFile m2 = parse_manifold("dim = 4\ncoords = a, b, c, d\ng[1][1] = 1\ng[2][2] = 1\ng[1][2] = 0.5*a\n");
  const std::vector<double> q{2, 0, 0, 0};
  CHECK(m2.spec.g_at(1, 0).eval(q) == doctest::Approx(1.0));
  CHECK(m2.spec.name == "manifold");
}

TEST_CASE("manifold file errors carry offsets") {
  const std::string head = "dim = 4\ncoords = x1, x2, x3, x4\n";
  CHECK(parse_offset(head + "g[1][1] = \"1 +\"\n") > head.size());
  CHECK(parse_offset(head + "g[5][1] = \"1\"\n") >= head.size());
  CHECK(parse_offset(head + "bogus = 1\n") == head.size());
  CHECK_THROWS_AS(parse_manifold("coords = x1, x2\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold("dim = 4\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold("dim = 3\ncoords = a, b, c\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold(head + "dim = 4\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold(head + "g[1][2] = \"1\"\ng[2][1] = \"2\"\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold(head + "g[1][1] = \"y\"\n"), ParseError);
  CHECK_THROWS_AS(parse_manifold(head + "probe = 1, 2\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse_manifold(head + "g[1][1] = \"1 +\"\n"), doctest::Contains("line 3"), ParseError);

  // compatibility is checked on the probe point
  std::string bad_j = kHyperbolic;
  bad_j.replace(bad_j.find("J[2][1] = \"1\""), 13, "J[2][1] = \"2\"");
  CHECK_THROWS_AS(build_chart(parse_manifold(bad_j)), ChartDomainError);
  CHECK_THROWS_AS(load_manifold((scratch_dir() / "missing.tvb").string()), std::runtime_error);
}

TEST_CASE("point parsing") {
  CHECK(parse_point("1, -2.5,3e-1") == std::vector<double>{1, -2.5, 0.3});
  CHECK_THROWS_AS(parse_point("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point("1,a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point(""), std::invalid_argument);
}

TEST_CASE("report command") {
  const Result r3 = invoke({"report", "--manifold", "example3", "--point", "1,0,0,0", "--format", "json"});
  REQUIRE(r3.code == kExitOk);
  const Json j = Json::parse(r3.out);
  CHECK(j["schemaVersion"] == 1);
  CHECK(j["tau"].get<double>() == doctest::Approx(-6.0));
  CHECK(j["tauStar"].get<double>() == doctest::Approx(-2.0));
  CHECK(j["predicates"]["bochnerFlat"]["holds"] == true);

  const Result r1 = invoke({"report", "-m", "example1", "-p", "0,0,0,2", "--format", "json"});
  REQUIRE(r1.code == kExitOk);
  const Json j1 = Json::parse(r1.out);
  CHECK(j1["predicates"]["einstein"]["holds"] == true);
  CHECK(j1["predicates"]["bochnerFlat"]["holds"] == true);
  for (const auto& c : j1["expected"]) CHECK(c["passed"] == true);

  const Result rf = invoke({"report", "-m", "flat", "-p", "0,0,0,0", "--format", "json"});
  REQUIRE(rf.code == kExitOk);
  for (const auto& [name, pred] : Json::parse(rf.out)["predicates"].items()) {
    CAPTURE(name);
    CHECK(pred["residual"].get<double>() == 0.0);
  }

  const Result text = invoke({"report", "-m", "example1"});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("tau = -12") != std::string::npos);

  const Result tensors = invoke({"report", "-m", "example1", "--tensors", "--format", "json"});
  REQUIRE(tensors.code == kExitOk);
  CHECK(Json::parse(tensors.out).contains("tensors"));

  const Result csf = invoke({"report", "-m", "csf3", "--c", "2", "--format", "json"});
  REQUIRE(csf.code == kExitOk);
  CHECK(Json::parse(csf.out)["tau"].get<double>() == doctest::Approx(24.0));

  const std::string path = write_file("hyp.tvb", kHyperbolic);
  const Result file = invoke({"report", "-m", path, "--format", "json"});
  REQUIRE(file.code == kExitOk);
  CHECK(Json::parse(file.out)["tau"].get<double>() == doctest::Approx(-12.0));
}

TEST_CASE("exit codes") {
  CHECK(invoke({"report", "-m", "example1", "-p", "0,0,0,-1"}).code == kExitDomain);
  CHECK(invoke({"report", "-m", "nosuch"}).code == kExitUsage);
  CHECK(invoke({"report", "-m", "example1", "-p", "0,0,x,1"}).code == kExitUsage);
  CHECK(invoke({"report", "-m", "example1", "-p", "0,0,1"}).code == kExitUsage);
  CHECK(invoke({"report", "-m", "example2", "--K", "-1"}).code == kExitUsage);
  CHECK(invoke({"report", "-m", "example4", "--u", "x1 +"}).code == kExitParse);
  CHECK(invoke({"frobnicate"}).code == kExitUsage);
  CHECK(invoke({}).code == kExitUsage);
  const std::string bad = write_file("bad.tvb", "dim = 4\ncoords = x1, x2, x3, x4\ng[1][1] = \"(\"\n");
  const Result parse = invoke({"report", "-m", bad});
  CHECK(parse.code == kExitParse);
  CHECK(parse.err.find("line 3") != std::string::npos);
  CHECK(invoke({"sweep", "-m", "example1", "--grid", "0,0,0,-1:1:3"}).code == kExitDomain);
  CHECK(invoke({"sweep", "-m", "example1", "--grid", "0:1"}).code == kExitUsage);
  CHECK(invoke({"sweep", "-m", "csf2"}).code == kExitUsage);

  const std::string s2s2 = write_file("s2s2.tvb", R"(dim = 4
coords = x1, x2, x3, x4
g[1][1] = "4/(1 + x1^2 + x2^2)^2"
g[2][2] = "4/(1 + x1^2 + x2^2)^2"
g[3][3] = "4/(1 + x3^2 + x4^2)^2"
g[4][4] = "4/(1 + x3^2 + x4^2)^2"
J[2][1] = "1"
J[1][2] = "-1"
J[4][3] = "1"
J[3][4] = "-1"
)");
  const Result refused = invoke({"audit", "-m", s2s2, "--grid", "-0.5:0.5:2,0,0,0"});
  CHECK(refused.code == kExitAuditRefused);
  CHECK_FALSE(refused.err.empty());
}

TEST_CASE("sweep and audit") {
  const Result sweep = invoke({"sweep", "-m", "example3", "--format", "json"});
  REQUIRE(sweep.code == kExitOk);
  const Json j = Json::parse(sweep.out);
  CHECK(j["summary"]["points"] == 81);
  CHECK(j["summary"]["predicates"]["bochnerFlat"]["holds"] == 81);

  const Result e4 = invoke({"sweep", "-m", "example4", "--format", "json"});
  REQUIRE(e4.code == kExitOk);
  const Json s4 = Json::parse(e4.out)["summary"];
  CHECK(s4["predicates"]["weaklyStarEinstein"]["holds"] == s4["points"]);
  CHECK(s4["predicates"]["einstein"]["holds"] == 0);

  const Result flat = invoke({"sweep", "-m", "flat", "--format", "json"});
  REQUIRE(flat.code == kExitOk);
  for (const auto& [name, sc] : Json::parse(flat.out)["summary"]["scalars"].items()) {
    CAPTURE(name);
    CHECK(sc["spread"].get<double>() == 0.0);
  }

  const Result csv = invoke({"sweep", "-m", "example1", "--grid", "0:1:2,0,0,1:2:2", "--format", "csv"});
  REQUIRE(csv.code == kExitOk);
  std::istringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == csv_header(default_coords(4)));
  CHECK(header.rfind("index,x1,x2,x3,x4,tau,tauStar,s,G,holSect,u,v,w,h,", 0) == 0);
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 4);

  const auto out_path = (scratch_dir() / "sweep.csv").string();
  std::filesystem::remove(out_path);
  REQUIRE(invoke({"sweep", "-m", "example1", "--grid", "0:1:2,0,0,1:2:2", "--out", out_path}).code == kExitOk);
  std::ifstream written(out_path);
  std::string first;
  std::getline(written, first);
  CHECK(first == header);

  for (const char* name : {"example1", "example3"}) {
    const Result audit = invoke({"audit", "-m", name, "--format", "json"});
    CHECK(audit.code == kExitOk);
    CHECK(Json::parse(audit.out)["audit"]["passed"] == true);
  }
  const Result a2 = invoke({"audit", "-m", "example2", "--format", "json"});
  REQUIRE(a2.code == kExitOk);
  for (const auto& item : Json::parse(a2.out)["audit"]["items"])
    if (item["name"] == "kahler_star_ricci") {
      CHECK(item["applicable"].get<int>() > 0);
      CHECK(item["counterexamples"] == 0);
    }
}

TEST_CASE("list command") {
  const Result text = invoke({"list"});
  REQUIRE(text.code == kExitOk);
  for (const auto& name : catalog_names()) CHECK(text.out.find(name) != std::string::npos);
  const Result json = invoke({"list", "--format", "json"});
  REQUIRE(json.code == kExitOk);
  const Json j = Json::parse(json.out);
  CHECK(j["schemaVersion"] == 1);
  REQUIRE(j["entries"].size() == 7);
  for (const auto& e : j["entries"]) {
    CHECK_FALSE(e["citation"].get<std::string>().empty());
    CHECK_FALSE(e["expected"].empty());
  }
}

TEST_CASE("JSON round trip and byte-identical output") {
  for (const auto& name : {"example1", "example3", "example4", "csf2"}) {
    CAPTURE(name);
    const CatalogEntry e = lookup(name);
    const ClassificationReport r =
        e.point_only() ? classify_algebraic(e.algebraic()) : classify_point(*e.chart, e.sample_point);
    const Json j = report_to_json(r);
    const ClassificationReport back = report_from_json(j);
    CHECK(report_to_json(back).dump() == j.dump());
    CHECK(back.tau == r.tau);
    CHECK(back.bochner_flat.residual == r.bochner_flat.residual);
    CHECK(back.ricci_eigenvalues == r.ricci_eigenvalues);
    CHECK(Json::parse(j.dump()) == j);

    const Result a = invoke({"report", "-m", name, "--format", "json"});
    const Result b = invoke({"report", "-m", name, "--format", "json"});
    CHECK(a.out == b.out);
  }
  const Result s1 = invoke({"sweep", "-m", "example4", "--format", "json", "--threads", "1"});
  const Result s4 = invoke({"sweep", "-m", "example4", "--format", "json", "--threads", "4"});
  CHECK(s1.out == s4.out);
}

TEST_CASE("tolerance flag and TVB_TOL") {
  const auto tol_of = [](const Result& r) { return Json::parse(r.out)["tolerance"].get<double>(); };
  CHECK(tol_of(invoke({"report", "-m", "flat", "--format", "json"})) == 1e-8);
  CHECK(tol_of(invoke({"report", "-m", "flat", "--format", "json", "--tol", "1e-6"})) == 1e-6);
  ::setenv("TVB_TOL", "1e-5", 1);
  CHECK(tol_of(invoke({"report", "-m", "flat", "--format", "json"})) == 1e-5);
  CHECK(tol_of(invoke({"report", "-m", "flat", "--format", "json", "--tol", "1e-6"})) == 1e-6);
  ::setenv("TVB_TOL", "nonsense", 1);
  CHECK(invoke({"report", "-m", "flat"}).code == kExitUsage);
  ::unsetenv("TVB_TOL");
}

TEST_CASE("the executable reports exit codes") {
  const std::string tool = TVB_TOOL_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("list") == 0);
  CHECK(status("report -m example1 -p 0,0,0,-1") == 2);
  CHECK(status("report -m example4 --u 'x1 +'") == 3);
}
