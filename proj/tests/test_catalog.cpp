#include <doctest.h>

#include "oracles.hpp"
#include "tvb/catalog.hpp"

using namespace tvb;

namespace {

std::vector<CatalogEntry> all_entries() {
  std::vector<CatalogEntry> out;
  for (const auto& name : catalog_names()) out.push_back(lookup(name));
  out.push_back(example2(0.3));
  out.push_back(example4("0.3*(x1^2 - x2^2)"));
  out.push_back(csf(2, -1.5));
  out.push_back(csf(3, 0.5));
  return out;
}

}  // namespace

TEST_CASE("catalog names and lookup") {
  const std::vector<std::string> expected{"example1", "example2", "example3", "example4", "flat", "csf2", "csf3"};
  CHECK(catalog_names() == expected);
  for (const auto& name : expected) CHECK(lookup(name).name == name);
  CHECK_THROWS_AS(lookup("example5"), std::out_of_range);
  CatalogParams params;
  params.K = 2.0;
  params.c = -1.0;
  params.u = "x1";
  CHECK(lookup("csf2", params).algebraic().tau == doctest::Approx(-6.0));
  CHECK(lookup("example4", params).chart->spec().domain.contains(std::vector<double>{-0.5, 0, 0, 0}));
  CHECK_FALSE(lookup("example4", params).chart->spec().domain.contains(std::vector<double>{-1.5, 0, 0, 0}));
}

TEST_CASE("every expected property holds on the suggested grid") {
  for (const auto& e : all_entries()) {
    CAPTURE(e.name);
    CHECK_FALSE(e.expected.empty());
    std::vector<ClassificationReport> reports;
    if (e.point_only()) {
      CHECK_FALSE(e.grid.has_value());
      reports.push_back(classify_algebraic(e.algebraic()));
    } else {
      REQUIRE(e.grid.has_value());
      reports = classify_grid(*e.chart, *e.grid).reports;
      CHECK(e.chart->spec().domain.contains(e.sample_point, 0.1));
    }
    for (const auto& r : reports) {
      for (const auto& check : check_expected(e, r)) {
        CAPTURE(check.property.describe());
        CAPTURE(check.observed);
        CHECK(check.passed);
      }
    }
    for (const auto& p : e.expected) {
      CHECK((p.provenance == "PAPER" || p.provenance == "DERIVED" || p.provenance == "TRIVIAL"));
      CHECK_FALSE(p.describe().empty());
    }
  }
}

TEST_CASE("check_expected reports failures honestly") {
  const CatalogEntry e = example1();
  ClassificationReport r = classify_point(*e.chart, e.sample_point);
  r.tau = 0.0;
  r.einstein = Predicate{0.5, false};
  int failed = 0;
  for (const auto& c : check_expected(e, r)) failed += c.passed ? 0 : 1;
  CHECK(failed >= 2);

  const ClassificationReport alg = classify_algebraic(csf_algebraic(2, 1.0));
  CHECK_THROWS_AS(check_expected(e, alg), std::invalid_argument);
}

TEST_CASE("frames pull the coordinate metric back to the identity") {
  for (const auto& e : {example1(), example3()}) {
    CAPTURE(e.name);
    REQUIRE(e.frame.size() == 16);
    REQUIRE(e.frame_J.size() == 16);
    const int d = 4;
    for (const auto& p : oracle::random_points(e, 20, 71)) {
      const oracle::Arr g = oracle::metric_at(*e.chart, p);
      std::vector<double> E(16), JF(16), JC(16);
      for (int k = 0; k < 16; ++k) {
        E[k] = e.frame[k].eval(p);
        JF[k] = e.frame_J[k].eval(p);
        JC[k] = e.chart->spec().J[k].eval(p);
      }
      double worst = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double s = 0.0;
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s += E[i * d + a] * g(i, j) * E[j * d + b];
          worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
      CHECK(worst < 1e-12);
      // J_coord E = E J_frame
      double jw = 0.0;
      for (int i = 0; i < d; ++i)
        for (int b = 0; b < d; ++b) {
          double lhs = 0.0, rhs = 0.0;
          for (int k = 0; k < d; ++k) {
            lhs += JC[i * d + k] * E[k * d + b];
            rhs += E[i * d + k] * JF[k * d + b];
          }
          jw = std::max(jw, std::abs(lhs - rhs));
        }
      CHECK(jw < 1e-12);
    }
  }
}

TEST_CASE("Example 3 frame J is the displayed rotation") {
  const CatalogEntry e = example3();
  const std::vector<double> p{1.0, 0.0, 0.0, 0.7};
  const double c = std::cos(0.7), s = std::sin(0.7);
  const std::vector<double> expected{0, c, s, 0, -c, 0, 0, -s, -s, 0, 0, c, 0, s, -c, 0};
  for (int k = 0; k < 16; ++k) {
    const int i = k / 4, j = k % 4;
    // frame_J(a,b) is the a-th component of J e_b: the displayed (J_ij) transposed
    CHECK(e.frame_J[j * 4 + i].eval(p) == doctest::Approx(expected[k]).scale(1.0));
  }
}

TEST_CASE("Example 4 holomorphic curvature prediction") {
  for (const std::string u : {default_example4_u(), std::string("x1"), std::string("x1^2 - x2^2")}) {
    CAPTURE(u);
    const CatalogEntry e = example4(u);
    for (const auto& p : oracle::random_points(e, 10, 72)) {
      const ClassificationReport r = classify_point(*e.chart, p);
      CHECK(r.hol_sect_mean == doctest::Approx(expected_hol_curvature(u, p)).epsilon(1e-8).scale(1.0));
      CHECK(std::abs(r.tau_star - 4 * r.hol_sect_mean) < 1e-6);
      CHECK(r.const_hol_sect.residual < 1e-7);
    }
  }
}

TEST_CASE("constructor errors") {
  CHECK_THROWS_AS(example2(0.0), std::invalid_argument);
  CHECK_THROWS_AS(example2(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(csf(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(csf(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(example4("x1 +"), ParseError);
  CHECK_THROWS_AS(example4("y1"), ParseError);
  // the default grid leaves 1 + u <= 0 for a large u
  const CatalogEntry big = example4("3*x1");
  CHECK_THROWS_AS(classify_grid(*big.chart, *big.grid), GridDomainError);
}

TEST_CASE("standard structure and coordinates") {
  CHECK(default_coords(4) == std::vector<std::string>{"x1", "x2", "x3", "x4"});
  const auto J = standard_structure(4);
  const std::vector<double> p(4, 0.0);
  CHECK(J[1 * 4 + 0].eval(p) == 1.0);
  CHECK(J[0 * 4 + 1].eval(p) == -1.0);
  CHECK(J[3 * 4 + 2].eval(p) == 1.0);
  CHECK(J[2 * 4 + 3].eval(p) == -1.0);
  CHECK(J[0].eval(p) == 0.0);
}
